//! Aggregated analysis report for a monomial set.

use serde::Serialize;

use crate::bowtie::{is_polarizable, BowTie, BowTieKind};
use crate::error::Result;
use crate::graph::{bipartiteness, edge_graph, is_linearly_presented, require_cohesive, Bipartiteness};
use crate::monomial::MonomialSet;

#[derive(Debug, Clone, Serialize)]
pub struct BowTieSummary {
    pub cycle1: Vec<usize>,
    pub cycle2: Vec<usize>,
    pub path: Vec<usize>,
    pub kind: &'static str,
    pub loops: usize,
}

impl BowTieSummary {
    pub fn from(b: &BowTie) -> Self {
        BowTieSummary {
            cycle1: b.cycle1.edges.clone(),
            cycle2: b.cycle2.edges.clone(),
            path: b.path.clone(),
            kind: match b.kind() {
                BowTieKind::PathDegenerate => "path_degenerate",
                BowTieKind::Monedge => "monedge",
                BowTieKind::General => "general",
            },
            loops: b.loop_count(),
        }
    }
}

/// One-stop structural report. Requires a cohesive set.
#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeReport {
    pub cohesive: bool,
    pub bipartite: bool,
    pub dimension: usize,
    pub l_diameter: Option<usize>,
    pub linearly_presented: bool,
    pub polarizable: bool,
    pub normal: bool,
    pub odd_cycle_condition: bool,
    pub witnesses: Vec<BowTieSummary>,
    /// When the set is polarizable and the dimension equals the variable
    /// count, the defining rational map is birational onto its image.
    /// Reported as an implication, never verified independently.
    pub birational_onto_image_implied: bool,
}

pub fn analyze(set: &MonomialSet) -> Result<AnalyzeReport> {
    require_cohesive(set)?;
    let polar = is_polarizable(set)?;
    let dimension = set.algebra_dimension();
    let bip = matches!(bipartiteness(&set.graph()), Bipartiteness::Bipartite { .. });
    Ok(AnalyzeReport {
        cohesive: true,
        bipartite: bip,
        dimension,
        l_diameter: edge_graph(set).diameter(),
        linearly_presented: is_linearly_presented(set)?,
        polarizable: polar.polarizable,
        normal: polar.normal,
        odd_cycle_condition: polar.odd_cycle_condition,
        witnesses: polar.witnesses.iter().map(BowTieSummary::from).collect(),
        birational_onto_image_implied: polar.polarizable && dimension == set.n(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loop_chain_report() {
        let set = MonomialSet::parse("x1^2\nx1*x2\nx2^2\nx2*x3\nx3^2").unwrap();
        let r = analyze(&set).unwrap();
        assert!(!r.polarizable);
        assert!(!r.normal);
        assert!(!r.linearly_presented);
        assert_eq!(r.dimension, 3);
        assert!(!r.bipartite);
        assert_eq!(r.l_diameter, Some(3));
        assert_eq!(r.witnesses.len(), 1);
        assert_eq!(r.witnesses[0].kind, "general");
    }

    #[test]
    fn square_report_is_all_green() {
        let set = MonomialSet::from_pairs(4, &[(1, 2), (2, 3), (3, 4), (4, 1)]).unwrap();
        let r = analyze(&set).unwrap();
        assert!(r.bipartite && r.polarizable && r.normal);
        // dim = n - 1 for connected bipartite, so no birationality note.
        assert!(!r.birational_onto_image_implied);
    }
}
