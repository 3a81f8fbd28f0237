/// Resource limits shared by the exact-arithmetic and search routines.
///
/// Every limit is checked before the corresponding allocation or
/// enumeration happens, so an over-budget request fails fast with
/// [`Error::BudgetExceeded`](crate::Error::BudgetExceeded).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Maximum bit length of any single big-number intermediate.
    pub max_bits: u64,
    /// Maximum number of cells of a single point set.
    pub max_cells: u64,
    /// Maximum number of search nodes for one exhaustive search.
    pub max_nodes: u64,
}

impl Budget {
    pub const DEFAULT_BITS: u64 = 1 << 20;
    pub const DEFAULT_CELLS: u64 = 1 << 28;
    pub const DEFAULT_NODES: u64 = 50_000_000;

    pub fn with_bits(self, max_bits: u64) -> Self {
        Budget { max_bits, ..self }
    }

    pub fn with_cells(self, max_cells: u64) -> Self {
        Budget { max_cells, ..self }
    }

    pub fn with_nodes(self, max_nodes: u64) -> Self {
        Budget { max_nodes, ..self }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_bits: Self::DEFAULT_BITS,
            max_cells: Self::DEFAULT_CELLS,
            max_nodes: Self::DEFAULT_NODES,
        }
    }
}

/// Counts search nodes against [`Budget::max_nodes`].
#[derive(Debug)]
pub(crate) struct NodeCounter {
    used: u64,
    limit: u64,
}

impl NodeCounter {
    pub(crate) fn new(budget: &Budget) -> Self {
        NodeCounter {
            used: 0,
            limit: budget.max_nodes,
        }
    }

    pub(crate) fn tick(&mut self) -> crate::Result<()> {
        self.used += 1;
        if self.used > self.limit {
            return Err(crate::Error::budget(format!(
                "search exceeded {} nodes",
                self.limit
            )));
        }
        Ok(())
    }
}
