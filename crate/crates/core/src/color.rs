//! Triangular fermionic color-code blocks.
//!
//! A distance-`d` block is drawn as a brick-wall triangle pointing right.
//! With `m = (d - 1) / 2`, row `r` (top to bottom) holds `3r + 2` vertices
//! for `r < m` and `3(m - t) + 1` vertices for `r = m + t`, all left-aligned
//! at column 0. Vertices are numbered row-major from the top. Plaquettes are
//! the intersections of the vertex set with bricks covering rows `r, r+1`
//! and columns `c..=c+2` where `c ≡ r + 1 (mod 2)`; fragments of size 2 on
//! the boundary are dropped.

use serde::{Deserialize, Serialize};

use crate::error::{FqError, Result};
use crate::gf2::BinaryMatrix;
use crate::majorana::{Flavor, MajoranaMonomial};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Plaquette {
    /// Vertex ids (0-based), ascending.
    pub vertices: Vec<usize>,
    /// Colour tag in `0..3`.
    pub color: u8,
    /// Top row and leftmost column of the brick.
    pub row: usize,
    pub col: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorCodeBlock {
    d: usize,
    /// Local `(col, row)` of each vertex; row 0 is the top.
    coords: Vec<(usize, usize)>,
    row_start: Vec<usize>,
    row_width: Vec<usize>,
    plaquettes: Vec<Plaquette>,
    /// Left column, bottom-right side, top-right side.
    sides: [Vec<usize>; 3],
}

impl ColorCodeBlock {
    pub fn build(d: usize) -> Result<Self> {
        if d < 3 || d % 2 == 0 {
            return Err(FqError::InvalidBlockDistance(d));
        }
        let m = (d - 1) / 2;
        let row_width: Vec<usize> = (0..d)
            .map(|r| if r < m { 3 * r + 2 } else { 3 * (d - 1 - r) + 1 })
            .collect();
        let mut row_start = Vec::with_capacity(d);
        let mut coords = Vec::new();
        for (r, &w) in row_width.iter().enumerate() {
            row_start.push(coords.len());
            coords.extend((0..w).map(|c| (c, r)));
        }
        let mut block = Self {
            d,
            coords,
            row_start,
            row_width,
            plaquettes: Vec::new(),
            sides: Default::default(),
        };

        for r in 0..d - 1 {
            let max_c = block.row_width[r].max(block.row_width[r + 1]) as i64;
            let mut c = if r % 2 == 0 { -1 } else { -2 };
            while c < max_c {
                let mut verts = Vec::new();
                for rr in [r, r + 1] {
                    for cc in c..c + 3 {
                        if let Some(v) = block.at(cc, rr) {
                            verts.push(v);
                        }
                    }
                }
                if verts.len() >= 4 {
                    verts.sort_unstable();
                    let u = (c - r as i64 - 1).div_euclid(2);
                    let color = (u - r as i64).rem_euclid(3) as u8;
                    block.plaquettes.push(Plaquette {
                        vertices: verts,
                        color,
                        row: r,
                        col: c,
                    });
                }
                c += 2;
            }
        }

        let left: Vec<usize> = (0..d).map(|r| block.row_start[r]).collect();
        let top_right: Vec<usize> = (0..d)
            .map(|k| block.at((3 * (k / 2) + k % 2) as i64, k / 2).expect("on block"))
            .collect();
        let mut bottom_right = vec![
            block.at(3 * m as i64, m).expect("apex"),
            block.at(3 * m as i64 - 1, m).expect("apex neighbour"),
        ];
        for t in 1..=m {
            let base = 3 * (m - t) as i64;
            for c in [base, base - 1] {
                if let Some(v) = block.at(c, m + t) {
                    bottom_right.push(v);
                }
            }
        }
        block.sides = [left, bottom_right, top_right];
        Ok(block)
    }

    fn at(&self, c: i64, r: usize) -> Option<usize> {
        if r >= self.d || c < 0 || c as usize >= self.row_width[r] {
            None
        } else {
            Some(self.row_start[r] + c as usize)
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n_vertices(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[(usize, usize)] {
        &self.coords
    }

    /// Bounding box `(width, height)` in lattice steps.
    pub fn extent(&self) -> (usize, usize) {
        (*self.row_width.iter().max().unwrap_or(&0), self.d)
    }

    pub fn plaquettes(&self) -> &[Plaquette] {
        &self.plaquettes
    }

    pub fn sides(&self) -> &[Vec<usize>; 3] {
        &self.sides
    }

    fn monomial(&self, flavor: Flavor, verts: &[usize]) -> MajoranaMonomial {
        let n = self.n_vertices();
        match flavor {
            Flavor::Gamma => MajoranaMonomial::from_factors(n, verts.iter().copied(), []),
            Flavor::GammaTilde => MajoranaMonomial::from_factors(n, [], verts.iter().copied()),
        }
    }

    /// All-`flavor` product over each plaquette.
    pub fn plaquette_monomials(&self, flavor: Flavor) -> Vec<MajoranaMonomial> {
        self.plaquettes
            .iter()
            .map(|p| self.monomial(flavor, &p.vertices))
            .collect()
    }

    /// γ-type stabilizers followed by γ̃-type stabilizers.
    pub fn plaquette_stabilizers(&self) -> Vec<MajoranaMonomial> {
        let mut out = self.plaquette_monomials(Flavor::Gamma);
        out.extend(self.plaquette_monomials(Flavor::GammaTilde));
        out
    }

    /// Logical representative of the given flavour on side `side`.
    pub fn side_logical(&self, flavor: Flavor, side: usize) -> MajoranaMonomial {
        self.monomial(flavor, &self.sides[side])
    }

    /// `(γ^L, γ̃^L)` on the left side.
    pub fn logical_pair(&self) -> (MajoranaMonomial, MajoranaMonomial) {
        (
            self.side_logical(Flavor::Gamma, 0),
            self.side_logical(Flavor::GammaTilde, 0),
        )
    }

    /// Plaquette-vertex incidence matrix (rows = plaquettes).
    pub fn check_matrix(&self) -> BinaryMatrix {
        let n = self.n_vertices();
        BinaryMatrix::from_rows(
            n,
            self.plaquettes
                .iter()
                .map(|p| crate::gf2::Bits::from_indices(n, p.vertices.iter().copied()))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(v: &[usize]) -> Vec<usize> {
        v.iter().map(|i| i + 1).collect()
    }

    #[test]
    fn counts() {
        for (d, n, p) in [(3, 7, 3), (5, 19, 9), (7, 37, 18), (9, 61, 30)] {
            let b = ColorCodeBlock::build(d).unwrap();
            assert_eq!(b.n_vertices(), n, "d={d}");
            assert_eq!(b.plaquettes().len(), p, "d={d}");
            assert_eq!(b.n_vertices(), (3 * d * d + 1) / 4);
        }
    }

    #[test]
    fn rejects_even_and_small() {
        assert_eq!(
            ColorCodeBlock::build(4).unwrap_err(),
            FqError::InvalidBlockDistance(4)
        );
        assert!(ColorCodeBlock::build(1).is_err());
    }

    #[test]
    fn distance_five_layout() {
        let b = ColorCodeBlock::build(5).unwrap();
        let plaqs: Vec<Vec<usize>> = b.plaquettes().iter().map(|p| labels(&p.vertices)).collect();
        assert!(plaqs.contains(&vec![3, 4, 5, 8, 9, 10]));
        assert!(plaqs.contains(&vec![1, 2, 3, 4]));
        assert!(plaqs.contains(&vec![15, 16, 17, 19]));
        assert_eq!(labels(&b.sides()[0]), vec![1, 3, 8, 15, 19]);
        assert_eq!(labels(&b.sides()[1]), vec![14, 13, 18, 17, 19]);
        assert_eq!(labels(&b.sides()[2]), vec![1, 2, 6, 7, 14]);
    }

    #[test]
    fn plaquettes_even_and_sides_even_overlap() {
        for d in [3, 5, 7, 9] {
            let b = ColorCodeBlock::build(d).unwrap();
            for p in b.plaquettes() {
                assert_eq!(p.vertices.len() % 2, 0);
                for s in b.sides() {
                    let o = p.vertices.iter().filter(|v| s.contains(v)).count();
                    assert_eq!(o % 2, 0, "d={d} plaquette {:?} side {:?}", p.vertices, s);
                }
            }
            for s in b.sides() {
                assert_eq!(s.len(), d);
            }
        }
    }

    #[test]
    fn adjacent_plaquettes_differ_in_colour() {
        for d in [3, 5, 7] {
            let b = ColorCodeBlock::build(d).unwrap();
            let ps = b.plaquettes();
            for i in 0..ps.len() {
                for j in i + 1..ps.len() {
                    let shared = ps[i].vertices.iter().filter(|v| ps[j].vertices.contains(v)).count();
                    if shared >= 2 {
                        assert_ne!(ps[i].color, ps[j].color, "d={d} {:?} {:?}", ps[i], ps[j]);
                    }
                }
            }
        }
    }
}
