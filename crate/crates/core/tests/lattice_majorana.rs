use fqcodes::{Axis, Edge, Flavor, Lattice, MajoranaMonomial, Pauli, PauliOperator, Vertex};
use proptest::prelude::*;

type C = (f64, f64);
type Mat = Vec<Vec<C>>;

fn cmul(a: C, b: C) -> C {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn matmul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut out = vec![vec![(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == (0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                let t = cmul(a[i][k], b[k][j]);
                out[i][j].0 += t.0;
                out[i][j].1 += t.1;
            }
        }
    }
    out
}

fn kron(a: &Mat, b: &Mat) -> Mat {
    let (n, m) = (a.len(), b.len());
    let mut out = vec![vec![(0.0, 0.0); n * m]; n * m];
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out[i * m + k][j * m + l] = cmul(a[i][j], b[k][l]);
                }
            }
        }
    }
    out
}

fn single(p: char) -> Mat {
    let z = (0.0, 0.0);
    match p {
        'I' => vec![vec![(1.0, 0.0), z], vec![z, (1.0, 0.0)]],
        'X' => vec![vec![z, (1.0, 0.0)], vec![(1.0, 0.0), z]],
        'Y' => vec![vec![z, (0.0, -1.0)], vec![(0.0, 1.0), z]],
        'Z' => vec![vec![(1.0, 0.0), z], vec![z, (-1.0, 0.0)]],
        _ => unreachable!(),
    }
}

/// Jordan-Wigner matrix of `γ_v` or `γ̃_v` on `n` modes.
fn jw(n: usize, v: usize, flavor: Flavor) -> Mat {
    let mut m = vec![vec![(1.0, 0.0)]];
    for q in 0..n {
        let p = match q.cmp(&v) {
            std::cmp::Ordering::Less => 'Z',
            std::cmp::Ordering::Equal if flavor == Flavor::Gamma => 'X',
            std::cmp::Ordering::Equal => 'Y',
            std::cmp::Ordering::Greater => 'I',
        };
        m = kron(&m, &single(p));
    }
    m
}

fn monomial_matrix(m: &MajoranaMonomial) -> Mat {
    let n = m.n_vertices();
    let dim = 1 << n;
    let mut out: Mat = (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { (1.0, 0.0) } else { (0.0, 0.0) }).collect())
        .collect();
    for (v, f) in m.factors() {
        out = matmul(&out, &jw(n, v, f));
    }
    out
}

fn anticommute_oracle(a: &MajoranaMonomial, b: &MajoranaMonomial) -> bool {
    let (ma, mb) = (monomial_matrix(a), monomial_matrix(b));
    let (ab, ba) = (matmul(&ma, &mb), matmul(&mb, &ma));
    let close = |x: C, y: C| (x.0 - y.0).abs() < 1e-9 && (x.1 - y.1).abs() < 1e-9;
    let anti = ab.iter().flatten().zip(ba.iter().flatten()).all(|(&x, &y)| close(x, (-y.0, -y.1)));
    let comm = ab.iter().flatten().zip(ba.iter().flatten()).all(|(&x, &y)| close(x, y));
    assert!(anti != comm, "operators neither commute nor anticommute");
    anti
}

fn monomial(n: usize) -> impl Strategy<Value = MajoranaMonomial> {
    (prop::collection::vec(any::<bool>(), n), prop::collection::vec(any::<bool>(), n)).prop_map(move |(g, gt)| {
        MajoranaMonomial::from_factors(
            n,
            (0..n).filter(|&i| g[i]),
            (0..n).filter(|&i| gt[i]),
        )
    })
}

proptest! {
    #[test]
    fn anticommutation_matches_jordan_wigner(a in monomial(4), b in monomial(4)) {
        prop_assert_eq!(a.m_anticommutes(&b).unwrap(), anticommute_oracle(&a, &b));
    }

    #[test]
    fn anticommutation_is_bilinear(a in monomial(9), b in monomial(9), c in monomial(9)) {
        let ab = a.mul(&b);
        prop_assert_eq!(ab.anticommutes_with(&c), a.anticommutes_with(&c) != b.anticommutes_with(&c));
    }

    #[test]
    fn vertex_index_round_trips(lx in 2usize..7, ly in 2usize..7, lz in 2usize..5, i in 0usize..1000) {
        let l = Lattice::new_3d(lx, ly, lz);
        let i = i % l.n_vertices();
        prop_assert_eq!(l.vertex_index(l.vertex(i)), i);
        let v = l.vertex(i);
        prop_assert_eq!(i, v.x + lx * (v.y + ly * v.z));
    }

    #[test]
    fn edge_index_round_trips(lx in 2usize..7, ly in 2usize..7, i in 0usize..1000) {
        let l = Lattice::new_2d(lx, ly);
        let i = i % l.n_edges();
        let e = l.edge(i);
        prop_assert_eq!(l.edge_index(e), i);
        prop_assert_eq!(i, 2 * l.vertex_index(e.base) + e.axis.index());
    }

    #[test]
    fn steps_wrap_periodically(lx in 2usize..9, ly in 2usize..9, x in 0usize..9, y in 0usize..9) {
        let l = Lattice::new_2d(lx, ly);
        let v = Vertex::xy(x % lx, y % ly);
        prop_assert_eq!(l.step(l.step(v, [1, 0, 0]), [-1, 0, 0]), v);
        prop_assert_eq!(l.step(v, [lx as i64, 0, 0]), v);
        prop_assert_eq!(l.step(v, [0, ly as i64, 0]), v);
    }
}

#[test]
fn occupation_and_hopping_relations() {
    let n = 4;
    let w0 = MajoranaMonomial::occupation(n, 0);
    let w1 = MajoranaMonomial::occupation(n, 1);
    let t01 = MajoranaMonomial::hopping(n, 0, 1);
    let t12 = MajoranaMonomial::hopping(n, 1, 2);
    let t21 = MajoranaMonomial::hopping(n, 2, 1);
    let t23 = MajoranaMonomial::hopping(n, 2, 3);
    assert!(!w0.anticommutes_with(&w1));
    assert!(w0.anticommutes_with(&t01));
    assert!(w1.anticommutes_with(&t01));
    assert!(!t01.anticommutes_with(&t12));
    assert!(t01.anticommutes_with(&t21));
    assert!(!t01.anticommutes_with(&t23));
    assert!(t01.mul(&t01).is_identity());
}

#[test]
fn incident_edges_have_degree_2d() {
    let l = Lattice::new_3d(3, 4, 5);
    for v in l.vertices() {
        let edges = l.incident_edges(v).unwrap();
        assert_eq!(edges.len(), 6);
        for e in edges {
            let (a, b) = l.endpoints(e);
            assert!(a == v || b == v);
        }
    }
}

#[test]
fn translation_preserves_weight() {
    let l = Lattice::new_2d(5, 4);
    let q = l.edge_index(Edge::new(Axis::X, Vertex::xy(4, 3)));
    let op = PauliOperator::single(l.n_edges(), q, Pauli::Y);
    let moved = l.translate(&op, [1, 1, 0]).unwrap();
    assert_eq!(moved.weight(), 1);
    let expected = l.edge_index(Edge::new(Axis::X, Vertex::xy(0, 0)));
    assert_eq!(moved.get(expected), Pauli::Y);
}

#[test]
fn odd_products_are_not_rejected_by_multiply() {
    let g = MajoranaMonomial::gamma(3, 1);
    let gt = MajoranaMonomial::gamma_tilde(3, 1);
    let w = g.m_multiply(&gt).unwrap();
    assert_eq!(w, MajoranaMonomial::occupation(3, 1));
    assert!(!g.is_even());
    assert!(w.is_even());
}
