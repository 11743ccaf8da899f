//! Majorana monomials: products of `γ_v` and `γ̃_v` factors, signs dropped.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Result};
use crate::gf2::Bits;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MajoranaMonomial {
    g: Bits,
    gt: Bits,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Flavor {
    Gamma,
    GammaTilde,
}

impl MajoranaMonomial {
    pub fn identity(n_vertices: usize) -> Self {
        Self {
            g: Bits::zeros(n_vertices),
            gt: Bits::zeros(n_vertices),
        }
    }

    pub fn from_factors<I, J>(n_vertices: usize, gamma: I, gamma_tilde: J) -> Self
    where
        I: IntoIterator<Item = usize>,
        J: IntoIterator<Item = usize>,
    {
        Self {
            g: Bits::from_indices(n_vertices, gamma),
            gt: Bits::from_indices(n_vertices, gamma_tilde),
        }
    }

    pub fn from_bits(g: Bits, gt: Bits) -> Result<Self> {
        check_len(g.len(), gt.len())?;
        Ok(Self { g, gt })
    }

    /// `γ_v`.
    pub fn gamma(n_vertices: usize, v: usize) -> Self {
        Self::from_factors(n_vertices, [v], [])
    }

    /// `γ̃_v`.
    pub fn gamma_tilde(n_vertices: usize, v: usize) -> Self {
        Self::from_factors(n_vertices, [], [v])
    }

    /// Occupation `-i γ_v γ̃_v`.
    pub fn occupation(n_vertices: usize, v: usize) -> Self {
        Self::from_factors(n_vertices, [v], [v])
    }

    /// Hopping `i γ_a γ̃_b`.
    pub fn hopping(n_vertices: usize, a: usize, b: usize) -> Self {
        Self::from_factors(n_vertices, [a], [b])
    }

    pub fn n_vertices(&self) -> usize {
        self.g.len()
    }

    pub fn g_bits(&self) -> &Bits {
        &self.g
    }

    pub fn gt_bits(&self) -> &Bits {
        &self.gt
    }

    pub fn degree(&self) -> usize {
        self.g.count_ones() + self.gt.count_ones()
    }

    pub fn is_even(&self) -> bool {
        self.degree() % 2 == 0
    }

    pub fn is_identity(&self) -> bool {
        self.g.is_zero() && self.gt.is_zero()
    }

    pub fn has(&self, flavor: Flavor, v: usize) -> bool {
        match flavor {
            Flavor::Gamma => self.g.get(v),
            Flavor::GammaTilde => self.gt.get(v),
        }
    }

    pub fn toggle(&mut self, flavor: Flavor, v: usize) {
        match flavor {
            Flavor::Gamma => self.g.flip(v),
            Flavor::GammaTilde => self.gt.flip(v),
        }
    }

    /// Factors sorted by vertex, `γ` before `γ̃` on the same vertex.
    pub fn factors(&self) -> Vec<(usize, Flavor)> {
        let mut out: Vec<(usize, Flavor)> = self
            .g
            .iter_ones()
            .map(|v| (v, Flavor::Gamma))
            .chain(self.gt.iter_ones().map(|v| (v, Flavor::GammaTilde)))
            .collect();
        out.sort();
        out
    }

    pub fn m_multiply(&self, other: &MajoranaMonomial) -> Result<MajoranaMonomial> {
        check_len(self.n_vertices(), other.n_vertices())?;
        Ok(self.mul(other))
    }

    pub fn mul(&self, other: &MajoranaMonomial) -> MajoranaMonomial {
        let mut out = self.clone();
        out.mul_assign(other);
        out
    }

    pub fn mul_assign(&mut self, other: &MajoranaMonomial) {
        self.g.xor_assign(&other.g);
        self.gt.xor_assign(&other.gt);
    }

    pub fn m_anticommutes(&self, other: &MajoranaMonomial) -> Result<bool> {
        check_len(self.n_vertices(), other.n_vertices())?;
        Ok(self.anticommutes_with(other))
    }

    /// Two monomials of degrees `p`, `q` sharing `s` factors pick up the sign
    /// `(-1)^(p q - s)` when swapped.
    pub fn anticommutes_with(&self, other: &MajoranaMonomial) -> bool {
        let shared = self.g.overlap(&other.g) + self.gt.overlap(&other.gt);
        (self.degree() * other.degree() + shared) % 2 == 1
    }

    /// Vertices carrying at least one factor.
    pub fn support(&self) -> Bits {
        self.g.or(&self.gt)
    }

    /// Flat bit vector `(γ | γ̃)` of length `2n`.
    pub fn to_bits(&self) -> Bits {
        self.g.concat(&self.gt)
    }

    pub fn from_flat(v: &Bits) -> Self {
        let n = v.len() / 2;
        Self {
            g: v.slice(0, n),
            gt: v.slice(n, n),
        }
    }

    /// Keep only factors on vertices where `keep` is set.
    pub fn restrict(&self, keep: &Bits) -> Self {
        Self {
            g: self.g.and(keep),
            gt: self.gt.and(keep),
        }
    }
}

impl fmt::Debug for MajoranaMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .factors()
            .into_iter()
            .map(|(v, fl)| match fl {
                Flavor::Gamma => format!("g{v}"),
                Flavor::GammaTilde => format!("gt{v}"),
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_is_identity() {
        let g1 = MajoranaMonomial::gamma(4, 1);
        assert!(g1.m_multiply(&g1).unwrap().is_identity());
    }

    #[test]
    fn shared_start_cancels() {
        let (a, b, d) = (0, 1, 2);
        let t_ad = MajoranaMonomial::hopping(4, a, d);
        let t_ab = MajoranaMonomial::hopping(4, a, b);
        assert_eq!(
            t_ad.m_multiply(&t_ab).unwrap(),
            MajoranaMonomial::from_factors(4, [], [d, b])
        );
    }

    #[test]
    fn hoppings_sharing_an_end_anticommute() {
        let (a, b, c, d) = (0, 1, 2, 3);
        assert!(MajoranaMonomial::hopping(4, a, d)
            .m_anticommutes(&MajoranaMonomial::hopping(4, a, b))
            .unwrap());
        assert!(MajoranaMonomial::occupation(4, a)
            .m_anticommutes(&MajoranaMonomial::hopping(4, a, d))
            .unwrap());
        assert!(!MajoranaMonomial::hopping(4, a, b)
            .m_anticommutes(&MajoranaMonomial::hopping(4, c, d))
            .unwrap());
    }

    #[test]
    fn six_factor_identity() {
        // d, c, b, a around a square: T_dc T_bc T_ad T_ab W_b W_d.
        let (a, b, c, d) = (0, 1, 2, 3);
        let n = 4;
        let prod = [
            MajoranaMonomial::hopping(n, d, c),
            MajoranaMonomial::hopping(n, b, c),
            MajoranaMonomial::hopping(n, a, d),
            MajoranaMonomial::hopping(n, a, b),
            MajoranaMonomial::occupation(n, b),
            MajoranaMonomial::occupation(n, d),
        ]
        .iter()
        .fold(MajoranaMonomial::identity(n), |acc, m| acc.mul(m));
        assert!(prod.is_identity());
    }

    #[test]
    fn parity() {
        assert!(MajoranaMonomial::identity(3).is_even());
        assert!(!MajoranaMonomial::gamma(3, 1).is_even());
    }
}
