//! Ancestry queries: who was resident when each trajectory was born, and
//! which line of descent ends up fixed.

use alloc::vec;
use alloc::vec::Vec;

use crate::engine::EngineOutput;
use crate::profile::DomainError;

/// The chain of parents from `index` back to trajectory 0, starting with
/// `index` itself.
pub fn parent_chain(out: &EngineOutput, index: usize) -> Result<Vec<usize>, DomainError> {
    let mut chain = vec![out.ray(index)?.index];
    let mut current = index;
    while let Some(parent) = out.rays[current].parent_index() {
        // parents are born earlier, so the chain strictly descends
        debug_assert!(parent < current, "parent {parent} of {current} must be older");
        chain.push(parent);
        current = parent;
    }
    debug_assert_eq!(*chain.last().expect("chain starts non-empty"), 0, "every chain ends at the root");
    Ok(chain)
}

/// The eventual winner and its full ancestry.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct FixationReport {
    /// The final resident: its descendants take over the population.
    pub ultimate: usize,
    /// Ancestry of the winner, from the winner back to trajectory 0. These
    /// are exactly the trajectories whose lineage survives.
    pub chain: Vec<usize>,
}

/// Which trajectories fix: the final resident and its ancestors.
pub fn fixed_set(out: &EngineOutput) -> FixationReport {
    let ultimate = out.profile.last().m;
    let chain = parent_chain(out, ultimate).expect("the final resident is a valid trajectory");
    FixationReport { ultimate, chain }
}
