//! Parsers for command-line inputs: structure specs (named presets or JSON
//! files), class descriptors, linear orders, vertex lists and blocks, and
//! tuple-family files.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context};
use forge_core::{FiniteStructure, Flavor, LinearOrder, TupleFamily};

/// Parse `set | graph | hypergraph:r | krfree:r`.
pub fn parse_class(text: &str) -> anyhow::Result<Flavor> {
    let mut parts = text.split(':');
    let head = parts.next().unwrap_or_default();
    let arg = parts.next();
    if parts.next().is_some() {
        bail!("malformed class {text:?}");
    }
    let need = |arg: Option<&str>| -> anyhow::Result<usize> {
        arg.ok_or_else(|| anyhow!("class {text:?} needs a numeric parameter"))?
            .parse::<usize>()
            .context("class parameter")
    };
    match head {
        "set" => Ok(Flavor::Set),
        "graph" => Ok(Flavor::Graph),
        "hypergraph" => Ok(Flavor::Hypergraph { arity: need(arg)? }),
        "krfree" => Ok(Flavor::KrFree { r: need(arg)? }),
        _ => bail!("unknown class {text:?}"),
    }
}

/// Load a structure from a JSON file per the schema
/// `{"flavor":...,"n":...,"edges":[...]}`.
pub fn load_structure(path: &Path) -> anyhow::Result<FiniteStructure> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading structure file {}", path.display()))?;
    serde_json::from_str(&text)
        .with_context(|| format!("parsing structure file {}", path.display()))
}

/// Parse a structure argument: a JSON file path (anything ending in
/// `.json`), inline JSON (starts with `{`), or a named preset:
/// `set:N`, `empty:N`, `complete:N` (alias `kN`), `cycle:N` (alias `cN`),
/// `path:N` (alias `pathN`), `edge`, `turan:N:PARTS`,
/// `hypercomplete:N:R`, `hyperedge:R`, `setN`, `emptyN`.
pub fn parse_structure(text: &str) -> anyhow::Result<FiniteStructure> {
    if text.starts_with('{') {
        return serde_json::from_str(text).context("parsing inline structure JSON");
    }
    if text.ends_with(".json") || text.contains('/') {
        return load_structure(Path::new(text));
    }
    if text == "edge" {
        return Ok(FiniteStructure::single_edge(Flavor::Graph)?);
    }
    let (name, args) = match text.split_once(':') {
        Some((name, rest)) => {
            let args = rest
                .split(':')
                .map(|p| p.parse::<usize>().context("numeric preset parameter"))
                .collect::<anyhow::Result<Vec<_>>>()?;
            (name.to_string(), args)
        }
        None => {
            // Shorthand like c5, k4, path3, set6.
            let split = text.find(|c: char| c.is_ascii_digit()).ok_or_else(|| {
                anyhow!("unknown structure {text:?}; expected a preset or a .json path")
            })?;
            let n = text[split..].parse::<usize>().context("preset size")?;
            let name = match &text[..split] {
                "c" => "cycle",
                "k" => "complete",
                other => other,
            };
            (name.to_string(), vec![n])
        }
    };
    let arg = |i: usize| -> anyhow::Result<usize> {
        args.get(i)
            .copied()
            .ok_or_else(|| anyhow!("preset {name:?} is missing parameter {i}"))
    };
    let structure = match name.as_str() {
        "set" => FiniteStructure::set(arg(0)?),
        "empty" => FiniteStructure::graph(arg(0)?, [])?,
        "complete" => FiniteStructure::complete_graph(arg(0)?),
        "cycle" => FiniteStructure::cycle(arg(0)?)?,
        "path" => FiniteStructure::path(arg(0)?),
        "turan" => FiniteStructure::turan(arg(0)?, arg(1)?)?,
        "hypercomplete" => FiniteStructure::complete_hypergraph(arg(0)?, arg(1)?)?,
        "hyperedge" => {
            FiniteStructure::single_edge(Flavor::Hypergraph { arity: arg(0)? })?
        }
        _ => bail!("unknown structure preset {name:?}"),
    };
    Ok(structure)
}

/// Parse a structure and, when a class is given, revalidate it under that
/// flavor.
pub fn parse_structure_as(text: &str, class: Option<Flavor>) -> anyhow::Result<FiniteStructure> {
    let structure = parse_structure(text)?;
    match class {
        Some(flavor) if flavor != structure.flavor() => Ok(structure.reflavor(flavor)?),
        _ => Ok(structure),
    }
}

/// Comma-separated vertex list, e.g. `2,3,4`. Empty string is the empty
/// list.
pub fn parse_vertices(text: &str) -> anyhow::Result<Vec<usize>> {
    if text.trim().is_empty() {
        return Ok(vec![]);
    }
    text.split(',')
        .map(|p| p.trim().parse::<usize>().context("vertex"))
        .collect()
}

/// A linear order as its ranking, e.g. `4,5,2,3,0,1`.
pub fn parse_order(text: &str) -> anyhow::Result<LinearOrder> {
    Ok(LinearOrder::new(parse_vertices(text)?)?)
}

/// Semicolon-separated blocks of comma-separated vertices, e.g. `2,3;4,5`.
pub fn parse_blocks(text: &str) -> anyhow::Result<Vec<Vec<usize>>> {
    if text.trim().is_empty() {
        return Ok(vec![]);
    }
    text.split(';').map(parse_vertices).collect()
}

/// Semicolon-separated rankings, e.g. `0,1;1,0`.
pub fn parse_orders(text: &str) -> anyhow::Result<Vec<LinearOrder>> {
    if text.trim().is_empty() {
        return Ok(vec![]);
    }
    text.split(';').map(parse_order).collect()
}

/// A tuple family from a JSON file or inline JSON
/// (`{"m":2,"n":6,"members":[[0,1]]}`).
pub fn parse_family(text: &str) -> anyhow::Result<TupleFamily> {
    if text.starts_with('{') {
        return serde_json::from_str(text).context("parsing inline family JSON");
    }
    let raw = fs::read_to_string(text).with_context(|| format!("reading family file {text}"))?;
    serde_json::from_str(&raw).with_context(|| format!("parsing family file {text}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_parsing() {
        assert_eq!(parse_class("set").unwrap(), Flavor::Set);
        assert_eq!(parse_class("graph").unwrap(), Flavor::Graph);
        assert_eq!(
            parse_class("hypergraph:3").unwrap(),
            Flavor::Hypergraph { arity: 3 }
        );
        assert_eq!(parse_class("krfree:3").unwrap(), Flavor::KrFree { r: 3 });
        assert!(parse_class("ring").is_err());
    }

    #[test]
    fn preset_parsing() {
        assert_eq!(parse_structure("c5").unwrap(), FiniteStructure::cycle(5).unwrap());
        assert_eq!(parse_structure("path3").unwrap(), FiniteStructure::path(3));
        assert_eq!(parse_structure("k4").unwrap(), FiniteStructure::complete_graph(4));
        assert_eq!(parse_structure("set:6").unwrap(), FiniteStructure::set(6));
        assert_eq!(
            parse_structure("turan:6:2").unwrap(),
            FiniteStructure::turan(6, 2).unwrap()
        );
        assert_eq!(
            parse_structure("hypercomplete:4:3").unwrap(),
            FiniteStructure::complete_hypergraph(4, 3).unwrap()
        );
    }

    #[test]
    fn reflavoring_checks_constraints() {
        let ok = parse_structure_as("c5", Some(Flavor::KrFree { r: 3 }));
        assert!(ok.is_ok());
        let bad = parse_structure_as("k4", Some(Flavor::KrFree { r: 3 }));
        assert!(bad.is_err());
    }

    #[test]
    fn list_parsers() {
        assert_eq!(parse_vertices("2,3,4").unwrap(), vec![2, 3, 4]);
        assert_eq!(parse_blocks("2,3;4,5").unwrap(), vec![vec![2, 3], vec![4, 5]]);
        assert_eq!(parse_orders("0,1;1,0").unwrap().len(), 2);
        let fam = parse_family(r#"{"m":2,"n":6,"members":[[0,1],[2,3]]}"#).unwrap();
        assert_eq!(fam.len(), 2);
    }
}
