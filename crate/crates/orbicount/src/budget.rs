/// Resource caps for searches and group materializations.
///
/// Every enumeration in the crate is exact; the budget only bounds how much
/// work is attempted before giving up with `Error::BudgetExceeded`.
#[derive(Debug, Clone)]
pub struct Budget {
    /// Largest group order for which a dense multiplication table is built.
    pub group_order_cap: usize,
    /// Node cap for the low-index coset-table search.
    pub search_nodes: u64,
    /// Node cap for homomorphism backtracking (partial assignments tried).
    pub hom_nodes: u64,
    /// State cap for orbit enumerations (classification of bundle data).
    pub orbit_states: usize,
    /// Order cap for the public class-function convolution operation.
    pub convolution_order_cap: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            group_order_cap: 20_000,
            search_nodes: 500_000_000,
            hom_nodes: 500_000_000,
            orbit_states: 1_000_000,
            convolution_order_cap: 2_000,
        }
    }
}

impl Budget {
    /// A budget with every cap raised; used by tests that deliberately push
    /// past the defaults.
    pub fn generous() -> Self {
        Budget {
            group_order_cap: 100_000,
            search_nodes: u64::MAX,
            hom_nodes: u64::MAX,
            orbit_states: 10_000_000,
            convolution_order_cap: 100_000,
        }
    }
}
