//! Phase-free Pauli operators, syndromes and coset minimisation.

use std::cmp::Ordering;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_len, FqError, Result};
use crate::gf2::{BinaryMatrix, Bits};

/// Pauli string over `n_qubits` qubits with signs dropped.
///
/// Qubit `q` carries `X` if only `x[q]` is set, `Z` if only `z[q]`, `Y` if both.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliOperator {
    x: Bits,
    z: Bits,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl PauliOperator {
    pub fn identity(n_qubits: usize) -> Self {
        Self {
            x: Bits::zeros(n_qubits),
            z: Bits::zeros(n_qubits),
        }
    }

    pub fn from_parts(x: Bits, z: Bits) -> Result<Self> {
        check_len(x.len(), z.len())?;
        Ok(Self { x, z })
    }

    pub fn from_xz<I, J>(n_qubits: usize, x_support: I, z_support: J) -> Self
    where
        I: IntoIterator<Item = usize>,
        J: IntoIterator<Item = usize>,
    {
        Self {
            x: Bits::from_indices(n_qubits, x_support),
            z: Bits::from_indices(n_qubits, z_support),
        }
    }

    pub fn single(n_qubits: usize, q: usize, p: Pauli) -> Self {
        let mut op = Self::identity(n_qubits);
        op.set(q, p);
        op
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.x.len()
    }

    #[inline]
    pub fn x_bits(&self) -> &Bits {
        &self.x
    }

    #[inline]
    pub fn z_bits(&self) -> &Bits {
        &self.z
    }

    pub fn get(&self, q: usize) -> Pauli {
        match (self.x.get(q), self.z.get(q)) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn set(&mut self, q: usize, p: Pauli) {
        let (x, z) = match p {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        };
        self.x.set(q, x);
        self.z.set(q, z);
    }

    /// Multiply a single-qubit Pauli onto qubit `q`.
    pub fn apply(&mut self, q: usize, p: Pauli) {
        match p {
            Pauli::I => {}
            Pauli::X => self.x.flip(q),
            Pauli::Z => self.z.flip(q),
            Pauli::Y => {
                self.x.flip(q);
                self.z.flip(q);
            }
        }
    }

    pub fn weight(&self) -> usize {
        self.x
            .words()
            .iter()
            .zip(self.z.words())
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    pub fn support(&self) -> Vec<usize> {
        self.x.or(&self.z).iter_ones().collect()
    }

    pub fn support_bits(&self) -> Bits {
        self.x.or(&self.z)
    }

    pub fn multiply(&self, other: &PauliOperator) -> Result<PauliOperator> {
        check_len(self.n_qubits(), other.n_qubits())?;
        Ok(self.mul(other))
    }

    /// Unchecked product; panics in debug builds on a size mismatch.
    pub fn mul(&self, other: &PauliOperator) -> PauliOperator {
        let mut out = self.clone();
        out.mul_assign(other);
        out
    }

    #[inline]
    pub fn mul_assign(&mut self, other: &PauliOperator) {
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
    }

    pub fn commutes(&self, other: &PauliOperator) -> Result<bool> {
        check_len(self.n_qubits(), other.n_qubits())?;
        Ok(self.commutes_with(other))
    }

    /// Unchecked symplectic test.
    #[inline]
    pub fn commutes_with(&self, other: &PauliOperator) -> bool {
        self.x.dot(&other.z) == self.z.dot(&other.x)
    }

    /// Symplectic vector `(x | z)` of length `2n`.
    pub fn to_symplectic(&self) -> Bits {
        self.x.concat(&self.z)
    }

    /// Vector `(z | x)`: its dot product with a symplectic vector is the
    /// commutation bit.
    pub fn to_symplectic_dual(&self) -> Bits {
        self.z.concat(&self.x)
    }

    pub fn from_symplectic(v: &Bits) -> Self {
        let n = v.len() / 2;
        Self {
            x: v.slice(0, n),
            z: v.slice(n, n),
        }
    }

    /// Keep only the qubits for which `keep` is true.
    pub fn restrict(&self, keep: &Bits) -> Self {
        Self {
            x: self.x.and(keep),
            z: self.z.and(keep),
        }
    }

    /// Lexicographic order on `(x, z)`, used for deterministic tie-breaking.
    pub fn lex_cmp(&self, other: &PauliOperator) -> Ordering {
        self.x.lex_cmp(&other.x).then_with(|| self.z.lex_cmp(&other.z))
    }

    /// Generator line in the check-matrix text format.
    pub fn to_text_line(&self) -> String {
        let xs: Vec<String> = self.x.iter_ones().map(|q| q.to_string()).collect();
        let zs: Vec<String> = self.z.iter_ones().map(|q| q.to_string()).collect();
        format!("X:{};Z:{}", xs.join(","), zs.join(","))
    }

    pub fn parse_text_line(n_qubits: usize, line: &str, line_no: usize) -> Result<Self> {
        let err = |msg: String| FqError::Parse { line: line_no, msg };
        let (xpart, zpart) = line
            .trim()
            .split_once(';')
            .ok_or_else(|| err("missing ';'".into()))?;
        let parse_list = |part: &str, tag: &str| -> Result<Vec<usize>> {
            let body = part
                .trim()
                .strip_prefix(tag)
                .ok_or_else(|| err(format!("expected '{tag}'")))?;
            body.split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| {
                    let q: usize = s.parse().map_err(|_| err(format!("bad qubit '{s}'")))?;
                    if q >= n_qubits {
                        return Err(err(format!("qubit {q} >= nqubits {n_qubits}")));
                    }
                    Ok(q)
                })
                .collect()
        };
        Ok(Self::from_xz(
            n_qubits,
            parse_list(xpart, "X:")?,
            parse_list(zpart, "Z:")?,
        ))
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for q in self.support() {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            let c = match self.get(q) {
                Pauli::X => 'X',
                Pauli::Y => 'Y',
                Pauli::Z => 'Z',
                Pauli::I => 'I',
            };
            write!(f, "{c}{q}")?;
        }
        if first {
            f.write_str("I")?;
        }
        Ok(())
    }
}

/// Anticommutation pattern of an operator against an ordered generator list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Syndrome {
    pub bits: Bits,
}

impl Syndrome {
    pub fn of(op: &PauliOperator, generators: &[PauliOperator]) -> Result<Self> {
        let mut bits = Bits::zeros(generators.len());
        for (i, g) in generators.iter().enumerate() {
            if !g.commutes(op)? {
                bits.set(i, true);
            }
        }
        Ok(Self { bits })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.bits.is_zero()
    }
}

/// Serialize a generator list in the check-matrix text format.
pub fn write_check_matrix(n_qubits: usize, generators: &[PauliOperator]) -> String {
    let mut out = format!("nqubits={n_qubits}\n");
    for g in generators {
        out.push_str(&g.to_text_line());
        out.push('\n');
    }
    out
}

pub fn read_check_matrix(text: &str) -> Result<(usize, Vec<PauliOperator>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let (hl, header) = lines.next().ok_or(FqError::Parse {
        line: 1,
        msg: "empty input".into(),
    })?;
    let n: usize = header
        .trim()
        .strip_prefix("nqubits=")
        .and_then(|s| s.parse().ok())
        .ok_or(FqError::Parse {
            line: hl + 1,
            msg: "expected 'nqubits=<n>' header".into(),
        })?;
    let gens = lines
        .map(|(i, l)| PauliOperator::parse_text_line(n, l, i + 1))
        .collect::<Result<Vec<_>>>()?;
    Ok((n, gens))
}

/// Stacked symplectic check matrix, one row per operator.
pub fn symplectic_matrix(ops: &[PauliOperator]) -> BinaryMatrix {
    let cols = ops.first().map(|p| 2 * p.n_qubits()).unwrap_or(0);
    BinaryMatrix::from_rows(cols, ops.iter().map(|p| p.to_symplectic()).collect())
}

/// Effort limits for [`min_weight_in_coset`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Enumerate the whole coset when there are at most this many generators.
    pub exhaustive_cutoff: usize,
    /// Random restarts of the greedy descent above the cutoff.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            exhaustive_cutoff: 20,
            restarts: 16,
            seed: 0,
        }
    }
}

/// Lowest-weight element of `base · <generators>` found within `budget`.
///
/// Ties are broken by the lexicographically smallest `(x, z)` pattern.
pub fn min_weight_in_coset(
    base: &PauliOperator,
    generators: &[PauliOperator],
    budget: SearchBudget,
) -> PauliOperator {
    min_weight_in_coset_by(base, generators, budget, |a, b| a.lex_cmp(b))
}

/// As [`min_weight_in_coset`], with a caller-supplied tie-break among
/// operators of equal weight (smaller wins).
pub fn min_weight_in_coset_by<F>(
    base: &PauliOperator,
    generators: &[PauliOperator],
    budget: SearchBudget,
    tie: F,
) -> PauliOperator
where
    F: Fn(&PauliOperator, &PauliOperator) -> Ordering,
{
    let better = |cand: &PauliOperator, cw: usize, best: &PauliOperator, bw: usize| {
        cw < bw || (cw == bw && tie(cand, best) == Ordering::Less)
    };
    let mut best = base.clone();
    let mut best_w = best.weight();
    if generators.is_empty() {
        return best;
    }

    if generators.len() <= budget.exhaustive_cutoff {
        // Gray-code walk: each step toggles one generator.
        let mut cur = base.clone();
        let total: u64 = 1 << generators.len();
        for i in 1..total {
            let flip = i.trailing_zeros() as usize;
            cur.mul_assign(&generators[flip]);
            let w = cur.weight();
            if better(&cur, w, &best, best_w) {
                best = cur.clone();
                best_w = w;
            }
        }
        return best;
    }

    let descend = |start: PauliOperator| -> PauliOperator {
        let mut cur = start;
        let mut cur_w = cur.weight();
        loop {
            let mut improved = false;
            for g in generators {
                let cand = cur.mul(g);
                let w = cand.weight();
                if better(&cand, w, &cur, cur_w) {
                    cur = cand;
                    cur_w = w;
                    improved = true;
                }
            }
            if !improved {
                return cur;
            }
        }
    };

    let first = descend(base.clone());
    let fw = first.weight();
    if better(&first, fw, &best, best_w) {
        best = first;
        best_w = fw;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut order: Vec<usize> = (0..generators.len()).collect();
    for _ in 0..budget.restarts {
        order.shuffle(&mut rng);
        let mut start = best.clone();
        for &g in order.iter().take(generators.len().min(4)) {
            start.mul_assign(&generators[g]);
        }
        let cand = descend(start);
        let w = cand.weight();
        if better(&cand, w, &best, best_w) {
            best = cand;
            best_w = w;
        }
    }
    best
}
