//! Randomized invariants of the cut geometry and the enrichment.

use proptest::prelude::*;

use xnits::enrichment::{build_dof_map, shifted_heaviside};
use xnits::geometry::{
    build_structured_mesh, classify_and_cut, Domain, GridKind, LevelSetShape, Side, Space,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Sub-element measures of every cut element sum to the element measure,
    /// and flipping the level-set sign swaps sides and negates normals while
    /// keeping all measures.
    #[test]
    fn cut_measures_conserved_and_sign_flip_mirrors(
        px in -0.9f64..0.9,
        py in -0.9f64..0.9,
        angle in 0.0f64..std::f64::consts::PI,
        seed in 0u64..200,
    ) {
        let mesh = build_structured_mesh(
            Domain::rect([-1.0, -1.0], [1.0, 1.0]),
            0.3,
            GridKind::TriangleIrregular { seed },
        ).unwrap();
        let normal = [angle.cos(), angle.sin()];
        let shape = LevelSetShape::plane([px, py], normal).unwrap();
        let flipped = LevelSetShape::plane([px, py], [-normal[0], -normal[1]]).unwrap();
        let cut = classify_and_cut(&mesh, &shape).unwrap();
        let cut_f = classify_and_cut(&mesh, &flipped).unwrap();
        for ce in &cut.cut_elements {
            let total: f64 = ce.sub_elements.iter().map(|s| s.measure).sum();
            let elem = mesh.element_measure(ce.element);
            prop_assert!((total - elem).abs() <= 1e-12 * elem);
        }
        prop_assert_eq!(cut.cut_elements.len(), cut_f.cut_elements.len());
        for (a, b) in cut.cut_elements.iter().zip(&cut_f.cut_elements) {
            prop_assert_eq!(a.element, b.element);
            prop_assert!((a.area_plus - b.area_minus).abs() <= 1e-12);
            prop_assert!((a.area_minus - b.area_plus).abs() <= 1e-12);
            for (fa, fb) in a.facets.iter().zip(&b.facets) {
                prop_assert!((fa.measure - fb.measure).abs() <= 1e-12);
                prop_assert!((fa.normal[0] + fb.normal[0]).abs() <= 1e-12);
                prop_assert!((fa.normal[1] + fb.normal[1]).abs() <= 1e-12);
            }
        }
    }

    /// The interface jump of the enriched field equals 2 sum N_i a_i for
    /// arbitrary enriched values.
    #[test]
    fn jump_identity_for_random_values(
        cx in -0.5f64..0.5,
        cy in -0.5f64..0.5,
        r in 0.3f64..0.7,
        amp in prop::collection::vec(-5.0f64..5.0, 64),
    ) {
        let mesh = build_structured_mesh(
            Domain::rect([-1.0, -1.0], [1.0, 1.0]),
            0.25,
            GridKind::TriangleRegular,
        ).unwrap();
        let shape = LevelSetShape::circle([cx, cy], r).unwrap();
        let cut = classify_and_cut(&mesh, &shape).unwrap();
        prop_assume!(!cut.cut_elements.is_empty());
        let space = Space::new(&mesh, 1).unwrap();
        let dofs = build_dof_map(&space, &cut, &shape, 1).unwrap();
        for ce in cut.cut_elements.iter().take(8) {
            let basis = space.basis(ce.element);
            for facet in &ce.facets {
                let mid = [
                    0.5 * (facet.endpoints[0][0] + facet.endpoints[1][0]),
                    0.5 * (facet.endpoints[0][1] + facet.endpoints[1][1]),
                ];
                let n_vals = basis.values(mid);
                let mut jump = 0.0;
                let mut two_na = 0.0;
                for (k, &node) in basis.nodes.iter().enumerate() {
                    if dofs.is_enriched(node) {
                        let a = amp[node % amp.len()];
                        let hp = shifted_heaviside(Side::Plus, dofs.nodal_sign[node]);
                        let hm = shifted_heaviside(Side::Minus, dofs.nodal_sign[node]);
                        jump += n_vals[k] * (hp - hm) * a;
                        two_na += 2.0 * n_vals[k] * a;
                    }
                }
                prop_assert!((jump - two_na).abs() <= 1e-12 * two_na.abs().max(1.0));
            }
        }
    }
}
