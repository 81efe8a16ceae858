//! Cost caps for the exhaustive scans.
//!
//! Every capped operation refuses loudly instead of sampling or truncating,
//! so callers can rely on results being exact whenever they get one.

/// Caps on the exhaustive searches. `Caps::default()` gives the stock limits;
/// a runner may widen or narrow them globally (e.g. from an environment knob).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Largest host size for the exhaustive partition scan over all
    /// 2-colorings of the host's pairs.
    pub ramsey_host: usize,
    /// Largest number of target patterns the full-pattern witness will build.
    pub pattern_count: u128,
    /// Largest number of colorings `r^|Emb(A,C)|` the Ramsey-object check
    /// will consider.
    pub coloring_count: u128,
    /// Largest number of generator families `2^C(u,m)` for closed-set
    /// enumeration.
    pub closed_enum: u128,
    /// Largest family space `2^C(u,n)` for exact clique-free counting.
    pub clique_free: u128,
    /// Largest family space `2^C(u,n)` the census will enumerate exhaustively;
    /// beyond this, sampling must be requested explicitly.
    pub census_exhaustive: u128,
    /// Largest linear-order count `|B|!` for the expansion-property scan.
    pub order_count: u128,
    /// Largest vertex count for the exact maximum-independent-set search.
    pub independent_set_vertices: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            ramsey_host: 8,
            pattern_count: 1 << 20,
            coloring_count: 1 << 32,
            closed_enum: 1 << 20,
            clique_free: 1 << 20,
            census_exhaustive: 1 << 10,
            order_count: 1 << 20,
            independent_set_vertices: 32,
        }
    }
}

impl Caps {
    /// Replace every count-typed cap with `max_cost` and derive the host cap
    /// from it (largest host whose pair-coloring space fits).
    pub fn with_max_cost(max_cost: u64) -> Self {
        let c = u128::from(max_cost);
        let mut host = 2;
        while host < 64 {
            let pairs = (host + 1) * host / 2;
            if pairs >= 127 || (1u128 << pairs) > c {
                break;
            }
            host += 1;
        }
        Caps {
            ramsey_host: host,
            pattern_count: c,
            coloring_count: c,
            closed_enum: c,
            clique_free: c,
            census_exhaustive: c,
            order_count: c,
            independent_set_vertices: 32,
        }
    }

}
