//! Fermion-to-qubit map on square (distance 2) and cubic (distance 3)
//! lattices: generator images, vertex stabilizers, and translation between
//! Majorana monomials and Pauli operators.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{FqError, Result};
use crate::gf2::{Bits, RowReducer};
use crate::lattice::{Axis, Edge, Lattice, Vertex};
use crate::majorana::{Flavor, MajoranaMonomial};
use crate::pauli::{write_check_matrix, PauliOperator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GenKind {
    /// Hop from the vertex to its neighbour along `+axis`.
    Hop(Axis),
    Occupation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Generator {
    pub vertex: Vertex,
    pub kind: GenKind,
}

impl Generator {
    pub fn monomial(&self, l: &Lattice) -> MajoranaMonomial {
        let n = l.n_vertices();
        let v = l.vertex_index(self.vertex);
        match self.kind {
            GenKind::Occupation => MajoranaMonomial::occupation(n, v),
            GenKind::Hop(a) => {
                let w = l.vertex_index(l.step(self.vertex, a.unit()));
                MajoranaMonomial::hopping(n, v, w)
            }
        }
    }
}

/// Plane label of a vertex stabilizer: `(right, up)` axes.
pub type Plane = (Axis, Axis);

/// Stabilizer planes of the cubic map, as `(right, up)` pairs.
pub const PLANES_3D: [Plane; 3] = [(Axis::X, Axis::Y), (Axis::Z, Axis::X), (Axis::Y, Axis::Z)];

/// Result of translating a Pauli operator back into the fermionic algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraImage {
    Monomial(MajoranaMonomial),
    /// Anticommutes with the listed vertex stabilizer.
    Anticommutes { stabilizer: usize },
    /// Commutes with every vertex stabilizer but is not a product of
    /// generator images; `residual` is the unreduced remainder.
    NontrivialCycle { residual: PauliOperator },
}

impl AlgebraImage {
    pub fn monomial(&self) -> Option<&MajoranaMonomial> {
        match self {
            AlgebraImage::Monomial(m) => Some(m),
            _ => None,
        }
    }
}

#[derive(Debug)]
pub struct MappingTable {
    lattice: Lattice,
    d_fq: usize,
    images: Vec<PauliOperator>,
    stabilizers: Vec<PauliOperator>,
    stabilizer_labels: Vec<(Vertex, Plane)>,
    reducer: OnceLock<RowReducer>,
}

impl Clone for MappingTable {
    fn clone(&self) -> Self {
        Self {
            lattice: self.lattice.clone(),
            d_fq: self.d_fq,
            images: self.images.clone(),
            stabilizers: self.stabilizers.clone(),
            stabilizer_labels: self.stabilizer_labels.clone(),
            reducer: OnceLock::new(),
        }
    }
}

fn edge_q(l: &Lattice, axis: Axis, v: Vertex, d: [i64; 3]) -> usize {
    l.edge_index(Edge::new(axis, l.step(v, d)))
}

fn add3(a: [i64; 3], b: [i64; 3]) -> [i64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn neg3(a: [i64; 3]) -> [i64; 3] {
    [-a[0], -a[1], -a[2]]
}

/// Image of the `+axis` hop out of `a` on a square lattice.
pub fn generator_image_2d(l: &Lattice, a: Vertex, kind: GenKind) -> Result<PauliOperator> {
    check_vertex(l, a, 2)?;
    let n = l.n_edges();
    let x = Axis::X.unit();
    let y = Axis::Y.unit();
    Ok(match kind {
        GenKind::Hop(Axis::Y) => PauliOperator::from_xz(
            n,
            [edge_q(l, Axis::Y, a, [0; 3])],
            [edge_q(l, Axis::X, a, [0; 3])],
        ),
        GenKind::Hop(Axis::X) => PauliOperator::from_xz(
            n,
            [edge_q(l, Axis::X, a, [0; 3])],
            [edge_q(l, Axis::Y, a, add3(x, neg3(y)))],
        ),
        GenKind::Occupation => occupation_image(l, a)?,
        GenKind::Hop(Axis::Z) => {
            return Err(FqError::OutOfRange {
                what: "generator kind",
                detail: "z-hop on a square lattice".into(),
            })
        }
    })
}

/// Image of the `+axis` hop out of `a` on a cubic lattice.
///
/// With axes ordered cyclically (`x -> y -> z -> x`), the hop along `i`
/// carries `X` on its own edge, `Z` on the `(i+1)`-edge entering the target
/// from below, and `Z` on the `(i+2)`-edge leaving `a`. Restricted to the
/// planes `(x, y)`, `(z, x)`, `(y, z)` this is the square-lattice pattern.
pub fn generator_image_3d(l: &Lattice, a: Vertex, kind: GenKind) -> Result<PauliOperator> {
    check_vertex(l, a, 3)?;
    match kind {
        GenKind::Occupation => occupation_image(l, a),
        GenKind::Hop(i) => {
            let j = Axis::from_index((i.index() + 1) % 3);
            let k = Axis::from_index((i.index() + 2) % 3);
            Ok(PauliOperator::from_xz(
                l.n_edges(),
                [edge_q(l, i, a, [0; 3])],
                [
                    edge_q(l, j, a, add3(i.unit(), neg3(j.unit()))),
                    edge_q(l, k, a, [0; 3]),
                ],
            ))
        }
    }
}

fn occupation_image(l: &Lattice, a: Vertex) -> Result<PauliOperator> {
    let edges = l.incident_edges(a)?;
    Ok(PauliOperator::from_xz(
        l.n_edges(),
        [],
        edges.into_iter().map(|e| l.edge_index(e)),
    ))
}

fn check_vertex(l: &Lattice, v: Vertex, dim: usize) -> Result<()> {
    if l.dim() != dim {
        return Err(FqError::DimensionMismatch {
            expected: dim,
            found: l.dim(),
        });
    }
    if !l.contains(v) {
        return Err(FqError::OutOfRange {
            what: "vertex",
            detail: format!("{v:?}"),
        });
    }
    Ok(())
}

impl MappingTable {
    /// Distance-2 table on a periodic square lattice.
    pub fn new_2d(lattice: Lattice) -> Result<Self> {
        Self::build(lattice, 2)
    }

    /// Distance-3 table on a periodic cubic lattice.
    pub fn new_3d(lattice: Lattice) -> Result<Self> {
        Self::build(lattice, 3)
    }

    pub fn for_lattice(lattice: Lattice) -> Result<Self> {
        match lattice.dim() {
            2 => Self::new_2d(lattice),
            _ => Self::new_3d(lattice),
        }
    }

    fn build(lattice: Lattice, d_fq: usize) -> Result<Self> {
        let dim = lattice.dim();
        if lattice.boundary() != crate::lattice::Boundary::Periodic {
            return Err(FqError::InfeasibleLayout(
                "mapping tables require a periodic lattice".into(),
            ));
        }
        if lattice.sizes()[..dim].iter().any(|&s| s < 2) {
            return Err(FqError::InfeasibleLayout(
                "every lattice side must be at least 2".into(),
            ));
        }
        let mut images = Vec::with_capacity(lattice.n_vertices() * (dim + 1));
        for v in lattice.vertices() {
            for k in Self::kinds(dim) {
                images.push(if dim == 2 {
                    generator_image_2d(&lattice, v, k)?
                } else {
                    generator_image_3d(&lattice, v, k)?
                });
            }
        }
        let mut table = Self {
            lattice,
            d_fq,
            images,
            stabilizers: Vec::new(),
            stabilizer_labels: Vec::new(),
            reducer: OnceLock::new(),
        };
        let planes: Vec<Plane> = if dim == 2 {
            vec![(Axis::X, Axis::Y)]
        } else {
            PLANES_3D.to_vec()
        };
        let verts: Vec<Vertex> = table.lattice.vertices().collect();
        for &plane in &planes {
            for &v in &verts {
                let g = table.planar_stabilizer(v, plane);
                table.stabilizers.push(g);
                table.stabilizer_labels.push((v, plane));
            }
        }
        Ok(table)
    }

    fn kinds(dim: usize) -> impl Iterator<Item = GenKind> {
        Axis::ALL[..dim]
            .iter()
            .map(|&a| GenKind::Hop(a))
            .chain(std::iter::once(GenKind::Occupation))
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn d_fq(&self) -> usize {
        self.d_fq
    }

    pub fn n_qubits(&self) -> usize {
        self.lattice.n_edges()
    }

    fn gen_index(&self, g: Generator) -> usize {
        let k = match g.kind {
            GenKind::Hop(a) => a.index(),
            GenKind::Occupation => self.lattice.dim(),
        };
        self.lattice.vertex_index(g.vertex) * (self.lattice.dim() + 1) + k
    }

    pub fn generators(&self) -> Vec<Generator> {
        let dim = self.lattice.dim();
        self.lattice
            .vertices()
            .flat_map(|v| Self::kinds(dim).map(move |kind| Generator { vertex: v, kind }))
            .collect()
    }

    pub fn image(&self, g: Generator) -> &PauliOperator {
        &self.images[self.gen_index(g)]
    }

    pub fn hop(&self, v: Vertex, axis: Axis) -> &PauliOperator {
        self.image(Generator {
            vertex: v,
            kind: GenKind::Hop(axis),
        })
    }

    pub fn occupation(&self, v: Vertex) -> &PauliOperator {
        self.image(Generator {
            vertex: v,
            kind: GenKind::Occupation,
        })
    }

    /// Hop from `v` one step along `-axis`: `W_v · T(v-axis -> v) · W_(v-axis)`.
    pub fn derived_hopping(&self, v: Vertex, axis: Axis) -> PauliOperator {
        let back = self.lattice.step(v, neg3(axis.unit()));
        self.occupation(v)
            .mul(self.hop(back, axis))
            .mul(self.occupation(back))
    }

    /// `T_dc T_bc T_ad T_ab W_b W_d` around the square below-right of `d` in
    /// the given plane, with `a = d - up`, `b = a + right`, `c = d + right`.
    fn planar_stabilizer(&self, d: Vertex, (right, up): Plane) -> PauliOperator {
        let l = &self.lattice;
        let a = l.step(d, neg3(up.unit()));
        let b = l.step(a, right.unit());
        self.hop(d, right)
            .mul(self.hop(b, up))
            .mul(self.hop(a, up))
            .mul(self.hop(a, right))
            .mul(self.occupation(b))
            .mul(self.occupation(d))
    }

    /// All vertex stabilizers: one per vertex in 2D, three per vertex in 3D
    /// (ordered by plane, then vertex index).
    pub fn vertex_stabilizers(&self) -> &[PauliOperator] {
        &self.stabilizers
    }

    pub fn stabilizer_labels(&self) -> &[(Vertex, Plane)] {
        &self.stabilizer_labels
    }

    pub fn vertex_stabilizer(&self, v: Vertex, plane: Plane) -> Option<&PauliOperator> {
        self.stabilizer_labels
            .iter()
            .position(|&(u, p)| u == v && p == plane)
            .map(|i| &self.stabilizers[i])
    }

    /// Stabilizers touching any qubit in `support`.
    pub fn stabilizers_touching(&self, support: &Bits) -> Vec<PauliOperator> {
        self.stabilizers
            .iter()
            .filter(|g| g.support_bits().overlap(support) > 0)
            .cloned()
            .collect()
    }

    /// Image of `γ_u γ̃_w` along the x-then-y-then-z path from `u` to `w`.
    pub fn hop_path(&self, u: Vertex, w: Vertex) -> PauliOperator {
        let l = &self.lattice;
        if u == w {
            return self.occupation(u).clone();
        }
        let d = l.displacement(u, w);
        let mut op = PauliOperator::identity(self.n_qubits());
        let mut cur = u;
        let mut first = true;
        for &axis in l.axes() {
            let steps = d[axis.index()];
            for _ in 0..steps.unsigned_abs() {
                if !first {
                    op.mul_assign(self.occupation(cur));
                }
                first = false;
                if steps > 0 {
                    op.mul_assign(self.hop(cur, axis));
                    cur = l.step(cur, axis.unit());
                } else {
                    op.mul_assign(&self.derived_hopping(cur, axis));
                    cur = l.step(cur, neg3(axis.unit()));
                }
            }
        }
        debug_assert_eq!(cur, w);
        op
    }

    /// Ordered pair `(u, w)` with the min-image displacement `u -> w`
    /// lexicographically positive.
    fn orient(&self, p: Vertex, q: Vertex) -> (Vertex, Vertex) {
        let d = self.lattice.displacement(p, q);
        let positive = d.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0);
        if positive {
            (p, q)
        } else {
            (q, p)
        }
    }

    fn pair_image(&self, f1: (usize, Flavor), f2: (usize, Flavor)) -> PauliOperator {
        let l = &self.lattice;
        let (v1, v2) = (l.vertex(f1.0), l.vertex(f2.0));
        match (f1.1, f2.1) {
            (Flavor::Gamma, Flavor::GammaTilde) => self.hop_path(v1, v2),
            (Flavor::GammaTilde, Flavor::Gamma) => self.hop_path(v2, v1),
            (Flavor::GammaTilde, Flavor::GammaTilde) => {
                let (u, w) = self.orient(v1, v2);
                self.occupation(u).mul(&self.hop_path(u, w))
            }
            (Flavor::Gamma, Flavor::Gamma) => {
                let (u, w) = self.orient(v1, v2);
                self.hop_path(u, w).mul(self.occupation(w))
            }
        }
    }

    /// Greedy pairing of the factors of `m`. Factors are ordered by their
    /// position relative to the monomial's lowest corner (z, then y, then
    /// x; `γ` before `γ̃`), so the pairing commutes with translations. The
    /// first unpaired factor is matched with its nearest unpaired partner,
    /// earliest in that order on ties.
    pub fn pairing(&self, m: &MajoranaMonomial) -> Vec<((usize, Flavor), (usize, Flavor))> {
        let l = &self.lattice;
        let factors = m.factors();
        let Some(&(first, _)) = factors.first() else {
            return Vec::new();
        };
        let origin = l.vertex(first);
        let rel = |v: usize| {
            let d = l.displacement(origin, l.vertex(v));
            [d[2], d[1], d[0]]
        };
        let corner = factors.iter().map(|&(v, _)| rel(v)).min().expect("non-empty");
        let mut left: Vec<((usize, Flavor), [i64; 3])> = factors
            .into_iter()
            .map(|f| {
                let r = rel(f.0);
                (f, [r[0] - corner[0], r[1] - corner[1], r[2] - corner[2]])
            })
            .collect();
        left.sort_by_key(|&((_, fl), key)| (key, fl));
        let mut pairs = Vec::with_capacity(left.len() / 2);
        while left.len() >= 2 {
            let (f, _) = left.remove(0);
            let fv = l.vertex(f.0);
            let (j, _) = left
                .iter()
                .enumerate()
                .min_by_key(|(j, (g, _))| (l.distance(fv, l.vertex(g.0)), *j))
                .expect("non-empty");
            pairs.push((f, left.remove(j).0));
        }
        pairs
    }

    /// Pauli image of an even monomial via deterministic pairing and routing.
    pub fn majorana_to_pauli(&self, m: &MajoranaMonomial) -> Result<PauliOperator> {
        if m.n_vertices() != self.lattice.n_vertices() {
            return Err(FqError::DimensionMismatch {
                expected: self.lattice.n_vertices(),
                found: m.n_vertices(),
            });
        }
        if !m.is_even() {
            return Err(FqError::OddParity {
                factors: m.degree(),
            });
        }
        let mut op = PauliOperator::identity(self.n_qubits());
        for (f1, f2) in self.pairing(m) {
            op.mul_assign(&self.pair_image(f1, f2));
        }
        Ok(op)
    }

    fn reducer(&self) -> &RowReducer {
        self.reducer.get_or_init(|| {
            let nv = self.lattice.n_vertices();
            let gens = self.generators();
            let rows = gens
                .iter()
                .map(|&g| (self.image(g).to_symplectic(), g.monomial(&self.lattice).to_bits()))
                .chain(
                    self.stabilizers
                        .iter()
                        .map(|s| (s.to_symplectic(), Bits::zeros(2 * nv))),
                );
            let n_rows = gens.len() + self.stabilizers.len();
            RowReducer::with_payloads(2 * self.n_qubits(), rows, n_rows)
        })
    }

    /// Monomial whose image equals `p` modulo vertex stabilizers, or the
    /// reason none exists. Total parity maps to the identity, so of `m` and
    /// `m · ∏ γγ̃` the one with fewer factors is returned.
    pub fn pauli_to_majorana(&self, p: &PauliOperator) -> Result<AlgebraImage> {
        if p.n_qubits() != self.n_qubits() {
            return Err(FqError::DimensionMismatch {
                expected: self.n_qubits(),
                found: p.n_qubits(),
            });
        }
        if let Some(i) = self.stabilizers.iter().position(|g| !g.commutes_with(p)) {
            return Ok(AlgebraImage::Anticommutes { stabilizer: i });
        }
        let (residual, _, payload) = self.reducer().reduce(&p.to_symplectic());
        if residual.is_zero() {
            let m = MajoranaMonomial::from_flat(&payload);
            let nv = m.n_vertices();
            if 2 * m.degree() > 2 * nv || (m.degree() == nv && m.has(Flavor::Gamma, 0)) {
                let all = Bits::from_indices(nv, 0..nv);
                let c = MajoranaMonomial::from_bits(m.g_bits().xor(&all), m.gt_bits().xor(&all))?;
                return Ok(AlgebraImage::Monomial(c));
            }
            Ok(AlgebraImage::Monomial(m))
        } else {
            Ok(AlgebraImage::NontrivialCycle {
                residual: PauliOperator::from_symplectic(&residual),
            })
        }
    }

    /// Whether `p` lies in the group generated by the vertex stabilizers.
    pub fn in_stabilizer_group(&self, p: &PauliOperator) -> bool {
        RowReducer::new(
            2 * self.n_qubits(),
            self.stabilizers.iter().map(|s| s.to_symplectic()),
        )
        .contains(&p.to_symplectic())
    }

    /// Generator images in the check-matrix text format, one comment line
    /// per generator label.
    pub fn dump_text(&self) -> String {
        let gens = self.generators();
        let ops: Vec<PauliOperator> = gens.iter().map(|&g| self.image(g).clone()).collect();
        let body = write_check_matrix(self.n_qubits(), &ops);
        let mut out = String::new();
        let mut lines = body.lines();
        out.push_str(lines.next().unwrap_or_default());
        out.push('\n');
        for (g, line) in gens.iter().zip(lines) {
            let v = g.vertex;
            let kind = match g.kind {
                GenKind::Hop(a) => format!("hop+{}", a.name()),
                GenKind::Occupation => "occupation".into(),
            };
            out.push_str(&format!("# ({},{},{}) {kind}\n{line}\n", v.x, v.y, v.z));
        }
        out
    }
}

/// Outcome of the exhaustive generator-pair sweep.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct HomomorphismReport {
    pub pairs_checked: usize,
    pub mismatches: Vec<(Generator, Generator)>,
    /// Generators whose image anticommutes with some vertex stabilizer.
    pub stabilizer_violations: Vec<(Generator, usize)>,
    pub trivial_stabilizers: usize,
}

impl HomomorphismReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
            && self.stabilizer_violations.is_empty()
            && self.trivial_stabilizers == 0
    }
}

/// Compare Pauli commutation with Majorana commutation for every generator
/// pair, and check every vertex stabilizer commutes with every image.
pub fn validate_homomorphism(table: &MappingTable) -> HomomorphismReport {
    let l = table.lattice();
    let gens = table.generators();
    let monos: Vec<MajoranaMonomial> = gens.iter().map(|g| g.monomial(l)).collect();
    let mut report = HomomorphismReport::default();
    for i in 0..gens.len() {
        let pi = table.image(gens[i]);
        for j in i..gens.len() {
            report.pairs_checked += 1;
            let pauli_anti = !pi.commutes_with(table.image(gens[j]));
            if pauli_anti != monos[i].anticommutes_with(&monos[j]) {
                report.mismatches.push((gens[i], gens[j]));
            }
        }
        for (k, s) in table.vertex_stabilizers().iter().enumerate() {
            if !s.commutes_with(pi) {
                report.stabilizer_violations.push((gens[i], k));
            }
        }
    }
    report.trivial_stabilizers = table
        .vertex_stabilizers()
        .iter()
        .filter(|s| s.is_identity())
        .count();
    report
}

/// Like [`MappingTable::new_3d`] but rejects the table unless the
/// homomorphism sweep passes.
pub fn validated_table(lattice: Lattice) -> Result<MappingTable> {
    let table = MappingTable::for_lattice(lattice)?;
    let report = validate_homomorphism(&table);
    if report.passed() {
        Ok(table)
    } else {
        Err(FqError::TranscriptionInvalid(format!(
            "{} commutation mismatches, {} stabilizer violations, {} trivial stabilizers",
            report.mismatches.len(),
            report.stabilizer_violations.len(),
            report.trivial_stabilizers
        )))
    }
}

/// Collapse a cubic-lattice operator onto the coordinate plane `(u, w)`:
/// edges along the third axis are dropped, the remaining edges are mapped
/// to the square lattice of the plane (u -> x, w -> y) and XOR-summed over
/// layers. Pass `layer = Some(k)` to keep only one layer.
pub fn project_to_plane(
    op: &PauliOperator,
    l3: &Lattice,
    (u, w): Plane,
    layer: Option<usize>,
) -> (Lattice, PauliOperator) {
    let third = Axis::ALL
        .into_iter()
        .find(|&a| a != u && a != w)
        .expect("three axes");
    let l2 = Lattice::new_2d(l3.size(u), l3.size(w));
    let map = |q: usize| -> Option<usize> {
        let e = l3.edge(q);
        if e.axis == third || layer.is_some_and(|k| e.base.coord(third) != k) {
            return None;
        }
        let axis = if e.axis == u { Axis::X } else { Axis::Y };
        let base = Vertex::xy(e.base.coord(u), e.base.coord(w));
        Some(l2.edge_index(Edge::new(axis, base)))
    };
    let mut out = PauliOperator::identity(l2.n_edges());
    for q in op.x_bits().iter_ones() {
        if let Some(p) = map(q) {
            out.apply(p, crate::pauli::Pauli::X);
        }
    }
    for q in op.z_bits().iter_ones() {
        if let Some(p) = map(q) {
            out.apply(p, crate::pauli::Pauli::Z);
        }
    }
    (l2, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::Pauli;

    fn t2() -> MappingTable {
        MappingTable::new_2d(Lattice::new_2d(6, 6)).unwrap()
    }

    #[test]
    fn image_weights_2d() {
        let t = t2();
        let a = Vertex::xy(2, 2);
        assert_eq!(t.hop(a, Axis::Y).weight(), 2);
        assert_eq!(t.hop(a, Axis::X).weight(), 2);
        assert_eq!(t.occupation(a).weight(), 4);
        assert!(t.occupation(a).x_bits().is_zero());
        // Z of the right hop sits on the down edge of the right neighbour.
        let right = t.hop(a, Axis::X);
        let l = t.lattice();
        let down = l.edge_index(Edge::new(Axis::Y, Vertex::xy(3, 1)));
        assert_eq!(right.get(down), Pauli::Z);
    }

    #[test]
    fn up_hop_anticommutes_with_occupation() {
        let t = t2();
        let a = Vertex::xy(1, 1);
        assert!(!t.hop(a, Axis::Y).commutes_with(t.occupation(a)));
    }

    #[test]
    fn derived_hops_have_weight_six() {
        let t = t2();
        assert_eq!(t.derived_hopping(Vertex::xy(2, 2), Axis::Y).weight(), 6);
        assert_eq!(t.derived_hopping(Vertex::xy(2, 2), Axis::X).weight(), 6);
    }

    #[test]
    fn down_times_up_is_two_occupations() {
        let t = t2();
        let d = Vertex::xy(3, 3);
        let a = Vertex::xy(3, 2);
        let prod = t.derived_hopping(d, Axis::Y).mul(t.hop(a, Axis::Y));
        assert_eq!(prod, t.occupation(a).mul(t.occupation(d)));
    }

    #[test]
    fn vertex_stabilizer_shape() {
        let t = t2();
        let l = t.lattice();
        let d = Vertex::xy(2, 3);
        let g = t.vertex_stabilizer(d, (Axis::X, Axis::Y)).unwrap();
        assert_eq!(g.weight(), 6);
        let e = |a, x, y| l.edge_index(Edge::new(a, Vertex::xy(x, y)));
        assert_eq!(g.get(e(Axis::Y, 2, 3)), Pauli::Z); // up
        assert_eq!(g.get(e(Axis::X, 1, 3)), Pauli::Z); // left
        assert_eq!(g.get(e(Axis::X, 2, 3)), Pauli::Y); // right
        assert_eq!(g.get(e(Axis::Y, 2, 2)), Pauli::Y); // down
        assert_eq!(g.get(e(Axis::X, 2, 2)), Pauli::X); // plaquette bottom
        assert_eq!(g.get(e(Axis::Y, 3, 2)), Pauli::X); // plaquette right
    }

    #[test]
    fn homomorphism_small() {
        let t = t2();
        assert!(validate_homomorphism(&t).passed());
        let t3 = MappingTable::new_3d(Lattice::new_3d(3, 3, 3)).unwrap();
        assert!(validate_homomorphism(&t3).passed());
    }

    #[test]
    fn odd_monomial_rejected() {
        let t = t2();
        let m = MajoranaMonomial::gamma(36, 0);
        assert!(matches!(
            t.majorana_to_pauli(&m),
            Err(FqError::OddParity { factors: 1 })
        ));
    }

    #[test]
    fn occupation_round_trip() {
        let t = t2();
        let v = 7;
        let m = MajoranaMonomial::occupation(36, v);
        let p = t.majorana_to_pauli(&m).unwrap();
        assert_eq!(&p, t.occupation(t.lattice().vertex(v)));
        assert_eq!(t.pauli_to_majorana(&p).unwrap(), AlgebraImage::Monomial(m));
    }

    #[test]
    fn single_z_is_outside() {
        let t = t2();
        let p = PauliOperator::single(t.n_qubits(), 5, Pauli::Z);
        assert!(t.pauli_to_majorana(&p).unwrap().monomial().is_none());
    }
}
