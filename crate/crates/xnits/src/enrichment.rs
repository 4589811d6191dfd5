//! Heaviside enrichment and enriched degree-of-freedom bookkeeping.
//!
//! A node is enriched exactly when an element of its support is cut. The
//! shifted basis H~_i(x) = H(x) - H(x_i) vanishes at every mesh node, so
//! classical dofs keep their nodal-value meaning and the jump across the
//! interface expands to 2 sum N_i a_i.

use crate::error::{Error, Result};
use crate::geometry::{CutDecomposition, LevelSetShape, Side, Space};

/// Sign function of the level set: +1 on the positive side, -1 on the
/// negative side; exactly 0 is rejected (evaluate per side instead).
pub fn heaviside(ls: f64) -> Result<f64> {
    if ls > 0.0 {
        Ok(1.0)
    } else if ls < 0.0 {
        Ok(-1.0)
    } else {
        Err(Error::HeavisideAtZero)
    }
}

/// Shifted enrichment value on one side for a node with sign `h_i`:
/// H~+ = 1 - H_i, H~- = -1 - H_i.
pub fn shifted_heaviside(side: Side, h_i: f64) -> f64 {
    side.sign() - h_i
}

/// Classical-then-enriched dof numbering over the nodes of a [`Space`].
#[derive(Debug, Clone)]
pub struct EnrichedDofMap {
    pub components: usize,
    pub n_nodes: usize,
    /// node -> slot among the enriched nodes, if enriched
    pub enriched_slot: Vec<Option<usize>>,
    /// enriched nodes in ascending order
    pub enriched_nodes: Vec<usize>,
    /// nodal Heaviside sign H_i (+-1) for every node
    pub nodal_sign: Vec<f64>,
    pub n_dofs: usize,
}

impl EnrichedDofMap {
    pub fn classical_dof(&self, node: usize, comp: usize) -> usize {
        node * self.components + comp
    }

    pub fn enriched_dof(&self, node: usize, comp: usize) -> Option<usize> {
        self.enriched_slot[node].map(|slot| (self.n_nodes + slot) * self.components + comp)
    }

    pub fn is_enriched(&self, node: usize) -> bool {
        self.enriched_slot[node].is_some()
    }

    pub fn n_enriched(&self) -> usize {
        self.enriched_nodes.len()
    }
}

/// Enrich exactly the nodes whose support is cut by the interface.
///
/// Nodal signs come from the level set at each space node (midside nodes of
/// an order-2 space included); a node snapped onto the interface gets +1.
pub fn build_dof_map(
    space: &Space,
    cut: &CutDecomposition,
    shape: &LevelSetShape,
    components: usize,
) -> Result<EnrichedDofMap> {
    if components != 1 && components != 2 {
        return Err(Error::Assembly(format!(
            "unsupported component count {components}"
        )));
    }
    let n_nodes = space.n_nodes();
    let mut enriched = vec![false; n_nodes];
    for ce in &cut.cut_elements {
        for &n in &space.element_nodes[ce.element] {
            enriched[n] = true;
        }
    }
    let enriched_nodes: Vec<usize> = (0..n_nodes).filter(|&n| enriched[n]).collect();
    let mut enriched_slot = vec![None; n_nodes];
    for (slot, &n) in enriched_nodes.iter().enumerate() {
        enriched_slot[n] = Some(slot);
    }
    let nodal_sign: Vec<f64> = space
        .node_coords
        .iter()
        .map(|&p| {
            let mut v = shape.value(p);
            if v.abs() < cut.snap_tol {
                v = 0.0;
            }
            if v == 0.0 {
                1.0
            } else {
                heaviside(v).expect("nonzero by construction")
            }
        })
        .collect();
    let n_dofs = components * (n_nodes + enriched_nodes.len());
    Ok(EnrichedDofMap {
        components,
        n_nodes,
        enriched_slot,
        enriched_nodes,
        nodal_sign,
        n_dofs,
    })
}
