use std::collections::HashSet;

use fqcodes::assembler::{check_invariants, HopDirection, LogicalKind};
use fqcodes::{assemble, BlockId, CodeBundle, ColorCodeBlock, FqError, LayoutSpec, RowReducer};

fn hop_weights(code: &fqcodes::ConcatenatedCode, dir: HopDirection) -> Vec<usize> {
    code.logicals
        .iter()
        .filter(|l| matches!(l.kind, LogicalKind::Hop { dir: d, .. } if d == dir))
        .map(|l| l.op.weight())
        .collect()
}

#[test]
fn occupation_and_hop_weights() {
    for (d, w, t) in [(3, 8, 8), (5, 12, 14), (7, 16, 20)] {
        let code = assemble(&LayoutSpec::new_2d(d, 2, 2)).unwrap();
        for b in 0..code.n_f() {
            assert_eq!(code.occupation_logical(b).unwrap().op.weight(), w, "d={d}");
        }
        let right = hop_weights(&code, HopDirection::Right);
        let up = hop_weights(&code, HopDirection::Up);
        assert!(!right.is_empty() && !up.is_empty());
        assert_eq!(right.iter().min(), Some(&t), "d={d}");
        assert_eq!(up.iter().min(), Some(&t), "d={d}");
        // Closed-form lower bound (5d - 1) / 2.
        assert!(right.iter().chain(&up).all(|&x| 2 * x >= 5 * d - 1));
    }
}

#[test]
fn padding_per_block() {
    for (d, nbx, nby, per_block) in [(5, 2, 2, 1), (9, 1, 2, 2), (5, 1, 4, 1)] {
        let code = assemble(&LayoutSpec::new_2d(d, nbx, nby)).unwrap();
        assert_eq!(code.padding.len(), per_block * code.n_f(), "d={d}");
        assert_eq!(code.padding_stabilizers.len(), code.padding.len());
        for s in &code.padding_stabilizers {
            assert_eq!(s.weight(), 4);
        }
    }
}

#[test]
fn blocks_tile_the_lattice() {
    for spec in [LayoutSpec::new_2d(5, 2, 2), LayoutSpec::new_3d(3, 1, 2, 2)] {
        let code = assemble(&spec).unwrap();
        let l = code.lattice();
        let mut seen = HashSet::new();
        for e in &code.embeddings {
            assert_eq!(e.vertices.len(), code.block.n_vertices());
            for &v in &e.vertices {
                assert!(seen.insert(l.vertex_index(v)), "vertex shared between blocks");
            }
        }
        for &p in &code.padding {
            assert!(seen.insert(l.vertex_index(p)));
        }
        assert_eq!(seen.len(), l.n_vertices());
    }
}

#[test]
fn invariants_hold_for_several_layouts() {
    for spec in [
        LayoutSpec::new_2d(3, 1, 2),
        LayoutSpec::new_2d(3, 2, 4),
        LayoutSpec::new_2d(5, 1, 2).without(BlockId { x: 0, y: 1, z: 0 }),
        LayoutSpec::new_3d(3, 1, 2, 2),
    ] {
        let code = assemble(&spec).unwrap();
        check_invariants(&code).unwrap();
    }
}

#[test]
fn plaquette_images_match_their_monomials() {
    let code = assemble(&LayoutSpec::new_2d(5, 1, 2)).unwrap();
    let gens = RowReducer::new(
        2 * code.n_qubits(),
        code.vertex_stabilizers().iter().map(|g| g.to_symplectic()),
    );
    for p in &code.plaquette_stabilizers {
        assert!(gens.contains(&p.op.mul(&p.raw).to_symplectic()));
        assert!(p.op.weight() <= p.raw.weight());
        assert!(matches!(p.op.weight(), 6 | 9), "weight {}", p.op.weight());
        let back = code.table.pauli_to_majorana(&p.op).unwrap();
        assert_eq!(back.monomial(), Some(&p.monomial));
    }
}

#[test]
fn logical_images_commute_with_stabilizers() {
    let code = assemble(&LayoutSpec::new_3d(3, 1, 2, 2)).unwrap();
    let stabs = code.stabilizers();
    for l in &code.logicals {
        assert!(stabs.iter().all(|s| s.commutes_with(&l.op)), "{}", l.label());
    }
}

#[test]
fn bundle_round_trips() {
    let code = assemble(&LayoutSpec::new_2d(3, 1, 2)).unwrap();
    let bundle = CodeBundle::from_code(&code);
    let back = CodeBundle::from_json(&bundle.to_json()).unwrap();
    assert_eq!(back, bundle);
    assert_eq!(back.stabilizers().unwrap(), code.stabilizers());
    let ops: Vec<_> = back.logical_ops().unwrap().into_iter().map(|(_, op)| op).collect();
    let orig: Vec<_> = code.logicals.iter().map(|l| l.op.clone()).collect();
    assert_eq!(ops, orig);
}

#[test]
fn layout_rejections() {
    assert_eq!(
        assemble(&LayoutSpec::new_2d(4, 1, 2)).unwrap_err(),
        FqError::InvalidBlockDistance(4)
    );
    assert!(matches!(
        assemble(&LayoutSpec::new_2d(3, 1, 3)).unwrap_err(),
        FqError::InfeasibleLayout(_)
    ));
    let mut spec = LayoutSpec::new_3d(3, 1, 2, 2);
    spec.d_fq = 2;
    assert!(assemble(&spec).is_err());
}

#[test]
fn rate_is_blocks_over_qubits() {
    let code = assemble(&LayoutSpec::new_2d(5, 2, 2)).unwrap();
    assert_eq!(code.params.n_f, 4);
    assert!((code.params.rate - 4.0 / code.n_qubits() as f64).abs() < 1e-12);
    // Lattice ((3d+1)/2 · N_by/2) × (d · N_bx).
    assert_eq!(code.lattice().sizes()[..2], [8, 10]);
}

#[test]
fn color_block_counts_and_logicals() {
    for d in [3, 5, 7, 9] {
        let b = ColorCodeBlock::build(d).unwrap();
        assert_eq!(b.n_vertices(), (3 * d * d + 1) / 4);
        let h = b.check_matrix();
        assert_eq!(h.rank(), (b.n_vertices() - 1) / 2);
        let (g, _) = b.logical_pair();
        assert_eq!(g.degree(), d);
        for p in b.plaquettes() {
            let overlap = p.vertices.iter().filter(|v| g.g_bits().get(**v)).count();
            assert_eq!(overlap % 2, 0);
        }
    }
}
