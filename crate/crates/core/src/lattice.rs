//! Square and cubic lattices with modes on vertices and qubits on edges.
//!
//! Conventions: `+x` points right, `+y` up, `+z` into the page. Vertex
//! `(x, y, z)` has linear index `x + Lx * (y + Ly * z)`; the edge leaving it
//! along axis `a` has index `dim * vertex_index + a`.

use serde::{Deserialize, Serialize};

use crate::error::{FqError, Result};
use crate::pauli::PauliOperator;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axis {
    X = 0,
    Y = 1,
    Z = 2,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Axis {
        Self::ALL[i]
    }

    pub fn unit(self) -> [i64; 3] {
        let mut u = [0; 3];
        u[self.index()] = 1;
        u
    }

    pub fn name(self) -> char {
        ['x', 'y', 'z'][self.index()]
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Boundary {
    #[default]
    Periodic,
    Open,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub x: usize,
    pub y: usize,
    pub z: usize,
}

impl Vertex {
    pub const fn new(x: usize, y: usize, z: usize) -> Self {
        Self { x, y, z }
    }

    pub const fn xy(x: usize, y: usize) -> Self {
        Self { x, y, z: 0 }
    }

    pub fn coord(&self, axis: Axis) -> usize {
        [self.x, self.y, self.z][axis.index()]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub axis: Axis,
    pub base: Vertex,
}

impl Edge {
    pub const fn new(axis: Axis, base: Vertex) -> Self {
        Self { axis, base }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Lattice {
    dim: usize,
    sizes: [usize; 3],
    boundary: Boundary,
}

impl Lattice {
    pub fn new_2d(lx: usize, ly: usize) -> Self {
        Self::with_boundary(&[lx, ly], Boundary::Periodic).expect("positive sizes")
    }

    pub fn new_3d(lx: usize, ly: usize, lz: usize) -> Self {
        Self::with_boundary(&[lx, ly, lz], Boundary::Periodic).expect("positive sizes")
    }

    pub fn with_boundary(sizes: &[usize], boundary: Boundary) -> Result<Self> {
        if !(2..=3).contains(&sizes.len()) || sizes.iter().any(|&s| s == 0) {
            return Err(FqError::OutOfRange {
                what: "lattice sizes",
                detail: format!("{sizes:?}"),
            });
        }
        let mut s = [1; 3];
        s[..sizes.len()].copy_from_slice(sizes);
        Ok(Self {
            dim: sizes.len(),
            sizes: s,
            boundary,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sizes(&self) -> [usize; 3] {
        self.sizes
    }

    pub fn size(&self, axis: Axis) -> usize {
        self.sizes[axis.index()]
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn axes(&self) -> &'static [Axis] {
        &Axis::ALL[..self.dim]
    }

    pub fn n_vertices(&self) -> usize {
        self.sizes.iter().product()
    }

    /// Size of the edge index space (`dim` slots per vertex). Under open
    /// boundaries slots whose edge would leave the lattice stay unused.
    pub fn n_edges(&self) -> usize {
        self.dim * self.n_vertices()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v.x < self.sizes[0] && v.y < self.sizes[1] && v.z < self.sizes[2]
    }

    fn check(&self, v: Vertex) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(FqError::OutOfRange {
                what: "vertex",
                detail: format!("{v:?} in lattice {:?}", &self.sizes[..self.dim]),
            })
        }
    }

    pub fn vertex_index(&self, v: Vertex) -> usize {
        debug_assert!(self.contains(v));
        v.x + self.sizes[0] * (v.y + self.sizes[1] * v.z)
    }

    pub fn vertex(&self, index: usize) -> Vertex {
        let [lx, ly, _] = self.sizes;
        Vertex::new(index % lx, (index / lx) % ly, index / (lx * ly))
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.n_vertices()).map(|i| self.vertex(i))
    }

    pub fn edge_index(&self, e: Edge) -> usize {
        debug_assert!(e.axis.index() < self.dim);
        self.dim * self.vertex_index(e.base) + e.axis.index()
    }

    pub fn edge(&self, index: usize) -> Edge {
        Edge::new(Axis::from_index(index % self.dim), self.vertex(index / self.dim))
    }

    /// Whether the edge exists (always true under periodic boundaries).
    pub fn edge_exists(&self, e: Edge) -> bool {
        match self.boundary {
            Boundary::Periodic => true,
            Boundary::Open => e.base.coord(e.axis) + 1 < self.size(e.axis),
        }
    }

    /// `v + d`, wrapped under periodic boundaries; `None` when it leaves an
    /// open lattice.
    pub fn shift(&self, v: Vertex, d: [i64; 3]) -> Option<Vertex> {
        let mut c = [v.x as i64, v.y as i64, v.z as i64];
        for a in 0..3 {
            let l = self.sizes[a] as i64;
            c[a] += d[a];
            match self.boundary {
                Boundary::Periodic => c[a] = c[a].rem_euclid(l),
                Boundary::Open => {
                    if c[a] < 0 || c[a] >= l {
                        return None;
                    }
                }
            }
        }
        Some(Vertex::new(c[0] as usize, c[1] as usize, c[2] as usize))
    }

    /// Periodic shift; panics on an open lattice if the result leaves it.
    pub fn step(&self, v: Vertex, d: [i64; 3]) -> Vertex {
        self.shift(v, d).expect("shift left the open lattice")
    }

    pub fn endpoints(&self, e: Edge) -> (Vertex, Vertex) {
        (e.base, self.step(e.base, e.axis.unit()))
    }

    /// Minimum-image displacement from `u` to `w` (ties resolved toward the
    /// positive direction).
    pub fn displacement(&self, u: Vertex, w: Vertex) -> [i64; 3] {
        let mut d = [0i64; 3];
        for a in 0..3 {
            let l = self.sizes[a] as i64;
            let raw = w.coord(Axis::ALL[a]) as i64 - u.coord(Axis::ALL[a]) as i64;
            d[a] = match self.boundary {
                Boundary::Open => raw,
                Boundary::Periodic => {
                    let m = raw.rem_euclid(l);
                    if 2 * m <= l {
                        m
                    } else {
                        m - l
                    }
                }
            };
        }
        d
    }

    pub fn distance(&self, u: Vertex, w: Vertex) -> usize {
        self.displacement(u, w).iter().map(|c| c.unsigned_abs() as usize).sum()
    }

    /// Incident edges ordered `+x, -x, +y, -y[, +z, -z]`; edges absent under
    /// open boundaries are skipped.
    pub fn incident_edges(&self, v: Vertex) -> Result<Vec<Edge>> {
        self.check(v)?;
        let mut out = Vec::with_capacity(2 * self.dim);
        for &a in self.axes() {
            let plus = Edge::new(a, v);
            if self.edge_exists(plus) {
                out.push(plus);
            }
            let mut back = [0i64; 3];
            back[a.index()] = -1;
            if let Some(u) = self.shift(v, back) {
                out.push(Edge::new(a, u));
            }
        }
        Ok(out)
    }

    /// Edges of the unit square in plane `(a, b)` whose top-left corner is `v`
    /// (`a` pointing right, `b` pointing up): left, bottom, right, top.
    pub fn plaquette_edges(&self, v: Vertex, plane: (Axis, Axis)) -> Result<[Edge; 4]> {
        self.check(v)?;
        let (a, b) = plane;
        if a == b || a.index() >= self.dim || b.index() >= self.dim {
            return Err(FqError::OutOfRange {
                what: "plane",
                detail: format!("({}, {}) in dimension {}", a.name(), b.name(), self.dim),
            });
        }
        let neg = |u: [i64; 3]| [-u[0], -u[1], -u[2]];
        let missing = || FqError::OutOfRange {
            what: "plaquette",
            detail: format!("{v:?} leaves the open lattice"),
        };
        let below = self.shift(v, neg(b.unit())).ok_or_else(missing)?;
        let below_right = self.shift(below, a.unit()).ok_or_else(missing)?;
        Ok([
            Edge::new(b, below),
            Edge::new(a, below),
            Edge::new(b, below_right),
            Edge::new(a, v),
        ])
    }

    /// Shift the support of `op` by `by` lattice steps.
    pub fn translate(&self, op: &PauliOperator, by: [i64; 3]) -> Result<PauliOperator> {
        if op.n_qubits() != self.n_edges() {
            return Err(FqError::DimensionMismatch {
                expected: self.n_edges(),
                found: op.n_qubits(),
            });
        }
        let map = |q: usize| -> Result<usize> {
            let e = self.edge(q);
            let base = self.shift(e.base, by).ok_or_else(|| FqError::OutOfRange {
                what: "translation",
                detail: format!("{e:?} by {by:?}"),
            })?;
            let moved = Edge::new(e.axis, base);
            if !self.edge_exists(moved) {
                return Err(FqError::OutOfRange {
                    what: "translation",
                    detail: format!("{moved:?} does not exist"),
                });
            }
            Ok(self.edge_index(moved))
        };
        let xs = op.x_bits().iter_ones().map(map).collect::<Result<Vec<_>>>()?;
        let zs = op.z_bits().iter_ones().map(map).collect::<Result<Vec<_>>>()?;
        Ok(PauliOperator::from_xz(self.n_edges(), xs, zs))
    }

    /// Deterministic representative of the translation class of a set of
    /// edges: the edge list shifted so that its smallest base vertex sits at
    /// the origin, minimised over all members as anchor.
    pub fn normalized_edges(&self, edges: &[usize]) -> Vec<(usize, [usize; 3])> {
        let mut best: Option<Vec<(usize, [usize; 3])>> = None;
        for &anchor in edges {
            let o = self.edge(anchor).base;
            let by = [-(o.x as i64), -(o.y as i64), -(o.z as i64)];
            let mut shape: Vec<(usize, [usize; 3])> = edges
                .iter()
                .map(|&q| {
                    let e = self.edge(q);
                    let b = self.step(e.base, by);
                    (e.axis.index(), [b.x, b.y, b.z])
                })
                .collect();
            shape.sort_by_key(|&(a, c)| (c[2], c[1], c[0], a));
            if best.as_ref().is_none_or(|b| shape < *b) {
                best = Some(shape);
            }
        }
        best.unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let l = Lattice::new_2d(4, 3);
        assert_eq!(l.n_vertices(), 12);
        assert_eq!(l.n_edges(), 24);
        let c = Lattice::new_3d(2, 3, 4);
        assert_eq!(c.n_edges(), 3 * 24);
    }

    #[test]
    fn incident_wraps() {
        let l = Lattice::new_2d(4, 4);
        let e = l.incident_edges(Vertex::xy(0, 0)).unwrap();
        assert_eq!(
            e,
            vec![
                Edge::new(Axis::X, Vertex::xy(0, 0)),
                Edge::new(Axis::X, Vertex::xy(3, 0)),
                Edge::new(Axis::Y, Vertex::xy(0, 0)),
                Edge::new(Axis::Y, Vertex::xy(0, 3)),
            ]
        );
    }

    #[test]
    fn cubic_degree() {
        let l = Lattice::new_3d(2, 2, 2);
        for v in l.vertices() {
            assert_eq!(l.incident_edges(v).unwrap().len(), 6);
        }
    }

    #[test]
    fn open_corner_has_two_edges() {
        let l = Lattice::with_boundary(&[4, 4], Boundary::Open).unwrap();
        assert_eq!(l.incident_edges(Vertex::xy(0, 0)).unwrap().len(), 2);
        assert_eq!(l.incident_edges(Vertex::xy(3, 3)).unwrap().len(), 2);
        assert_eq!(l.incident_edges(Vertex::xy(1, 1)).unwrap().len(), 4);
    }

    #[test]
    fn out_of_range_vertex() {
        let l = Lattice::new_2d(4, 4);
        assert!(l.incident_edges(Vertex::xy(4, 0)).is_err());
    }

    #[test]
    fn plaquette_down_right() {
        let l = Lattice::new_2d(4, 4);
        let p = l.plaquette_edges(Vertex::xy(1, 1), (Axis::X, Axis::Y)).unwrap();
        assert_eq!(
            p,
            [
                Edge::new(Axis::Y, Vertex::xy(1, 0)),
                Edge::new(Axis::X, Vertex::xy(1, 0)),
                Edge::new(Axis::Y, Vertex::xy(2, 0)),
                Edge::new(Axis::X, Vertex::xy(1, 1)),
            ]
        );
        let wrap = l.plaquette_edges(Vertex::xy(0, 0), (Axis::X, Axis::Y)).unwrap();
        assert_eq!(wrap[0].base, Vertex::xy(0, 3));
    }

    #[test]
    fn displacement_min_image() {
        let l = Lattice::new_2d(6, 6);
        assert_eq!(l.displacement(Vertex::xy(0, 0), Vertex::xy(5, 1)), [-1, 1, 0]);
        assert_eq!(l.displacement(Vertex::xy(0, 0), Vertex::xy(3, 0)), [3, 0, 0]);
    }
}
