//! Concatenated decoder and Monte Carlo harness.
//!
//! A trial samples a Pauli error, clears the vertex-stabilizer syndrome with
//! the inner decoder, reads the residual as a Majorana monomial, fixes
//! padding vertices, decodes the `γ` and `γ̃` parts of every block
//! independently and classifies the total operator.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assembler::ConcatenatedCode;
use crate::color::ColorCodeBlock;
use crate::error::{FqError, Result};
use crate::fqmap::{AlgebraImage, MappingTable};
use crate::gf2::{Bits, RowReducer};
use crate::majorana::{Flavor, MajoranaMonomial};
use crate::pauli::{Pauli, PauliOperator};
use crate::verifier::{identity_cycles, sector_generators};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseKind {
    /// Independent `X` and `Z` flips, each with probability `p`.
    IidXz,
    /// With probability `p`, one of `X`, `Y`, `Z` uniformly.
    Depolarizing,
}

impl FromStr for NoiseKind {
    type Err = FqError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "iid-xz" | "iid_xz" | "xz" => Ok(Self::IidXz),
            "depolarizing" | "depolarising" => Ok(Self::Depolarizing),
            other => Err(FqError::Parse {
                line: 0,
                msg: format!("unknown noise kind {other:?}"),
            }),
        }
    }
}

impl fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::IidXz => "iid-xz",
            Self::Depolarizing => "depolarizing",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub kind: NoiseKind,
    pub p: f64,
}

impl NoiseModel {
    pub fn new(kind: NoiseKind, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) || p.is_nan() {
            return Err(FqError::OutOfRange {
                what: "error rate",
                detail: format!("{p}"),
            });
        }
        Ok(Self { kind, p })
    }

    pub fn sample<R: Rng + ?Sized>(&self, n_qubits: usize, rng: &mut R) -> PauliOperator {
        let mut e = PauliOperator::identity(n_qubits);
        if self.p == 0.0 {
            return e;
        }
        for q in 0..n_qubits {
            match self.kind {
                NoiseKind::IidXz => {
                    if rng.gen_bool(self.p) {
                        e.apply(q, Pauli::X);
                    }
                    if rng.gen_bool(self.p) {
                        e.apply(q, Pauli::Z);
                    }
                }
                NoiseKind::Depolarizing => {
                    if rng.gen_bool(self.p) {
                        e.apply(q, [Pauli::X, Pauli::Y, Pauli::Z][rng.gen_range(0..3)]);
                    }
                }
            }
        }
        e
    }
}

pub fn sample_error<R: Rng + ?Sized>(model: &NoiseModel, code: &ConcatenatedCode, rng: &mut R) -> PauliOperator {
    model.sample(code.n_qubits(), rng)
}

fn syndrome_bits(op: &PauliOperator, gens: &[PauliOperator]) -> Bits {
    let mut s = Bits::zeros(gens.len());
    for (i, g) in gens.iter().enumerate() {
        if !g.commutes_with(op) {
            s.set(i, true);
        }
    }
    s
}

/// Single-qubit errors keyed by their vertex-stabilizer syndrome. The
/// first error (lowest qubit, then `X < Y < Z`) wins on collisions.
#[derive(Clone, Debug)]
pub struct LookupTable {
    map: HashMap<Bits, (usize, Pauli)>,
    collisions: usize,
}

impl LookupTable {
    pub fn build(table: &MappingTable) -> Self {
        let n = table.n_qubits();
        let mut groups: HashMap<Bits, Vec<(usize, Pauli)>> = HashMap::new();
        for q in 0..n {
            for p in [Pauli::X, Pauli::Y, Pauli::Z] {
                let s = syndrome_bits(&PauliOperator::single(n, q, p), table.vertex_stabilizers());
                groups.entry(s).or_default().push((q, p));
            }
        }
        let collisions = groups.values().map(|g| g.len() - 1).sum();
        // Within a collision group, keep the member whose products with the
        // others have the lightest Majorana images.
        let cost = |a: (usize, Pauli), b: (usize, Pauli)| -> usize {
            let mut op = PauliOperator::single(n, a.0, a.1);
            op.apply(b.0, b.1);
            match table.pauli_to_majorana(&op) {
                Ok(AlgebraImage::Monomial(m)) => m.degree(),
                _ => 4 * n,
            }
        };
        let map = groups
            .into_iter()
            .map(|(s, g)| {
                let best = if g.len() == 1 {
                    g[0]
                } else {
                    *g.iter()
                        .min_by_key(|&&a| (g.iter().map(|&b| if a == b { 0 } else { cost(a, b) }).sum::<usize>(), a.0))
                        .expect("nonempty group")
                };
                (s, best)
            })
            .collect();
        Self { map, collisions }
    }

    /// Whether distinct single-qubit errors have distinct syndromes.
    pub fn is_injective(&self) -> bool {
        self.collisions == 0
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn get(&self, s: &Bits) -> Option<(usize, Pauli)> {
        self.map.get(s).copied()
    }
}

/// Largest defect count matched exactly; above it matching is greedy.
pub const EXACT_MATCHING_LIMIT: usize = 14;

#[derive(Clone, Debug)]
struct Single {
    qubit: usize,
    pauli: Pauli,
    syndrome: Vec<usize>,
}

/// Inner decoder for the vertex-stabilizer syndrome.
#[derive(Clone, Debug)]
pub struct InnerDecoder {
    n_qubits: usize,
    n_checks: usize,
    singles: Vec<Single>,
    /// Singles touching each check.
    touching: Vec<Vec<usize>>,
    lookup: LookupTable,
    /// Present when every single flips exactly two checks.
    graph: Option<Vec<Vec<(usize, usize)>>>,
    global: RowReducer,
}

impl InnerDecoder {
    pub fn new(table: &MappingTable) -> Self {
        let n = table.n_qubits();
        let gens = table.vertex_stabilizers();
        let mut singles = Vec::with_capacity(3 * n);
        for q in 0..n {
            for p in [Pauli::X, Pauli::Y, Pauli::Z] {
                let s = syndrome_bits(&PauliOperator::single(n, q, p), gens);
                singles.push(Single {
                    qubit: q,
                    pauli: p,
                    syndrome: s.iter_ones().collect(),
                });
            }
        }
        let mut touching = vec![Vec::new(); gens.len()];
        for (i, s) in singles.iter().enumerate() {
            for &c in &s.syndrome {
                touching[c].push(i);
            }
        }
        let lookup = LookupTable::build(table);
        let graph = singles.iter().all(|s| s.syndrome.len() == 2).then(|| {
            let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); gens.len()];
            for (i, s) in singles.iter().enumerate() {
                let (a, b) = (s.syndrome[0], s.syndrome[1]);
                let key = Bits::from_indices(gens.len(), [a, b]);
                if lookup.get(&key) == Some((s.qubit, s.pauli)) {
                    adj[a].push((b, i));
                    adj[b].push((a, i));
                }
            }
            adj
        });
        let global = RowReducer::new(
            gens.len(),
            singles
                .iter()
                .map(|s| Bits::from_indices(gens.len(), s.syndrome.iter().copied())),
        );
        Self {
            n_qubits: n,
            n_checks: gens.len(),
            lookup,
            singles,
            touching,
            graph,
            global,
        }
    }

    pub fn lookup(&self) -> &LookupTable {
        &self.lookup
    }

    pub fn uses_matching(&self) -> bool {
        self.graph.is_some()
    }

    fn op_of(&self, idx: impl IntoIterator<Item = usize>) -> PauliOperator {
        let mut op = PauliOperator::identity(self.n_qubits);
        for i in idx {
            op.apply(self.singles[i].qubit, self.singles[i].pauli);
        }
        op
    }

    /// A Pauli correction whose syndrome equals `s`.
    pub fn decode(&self, s: &Bits) -> Result<PauliOperator> {
        if s.len() != self.n_checks {
            return Err(FqError::DimensionMismatch {
                expected: self.n_checks,
                found: s.len(),
            });
        }
        if s.is_zero() {
            return Ok(PauliOperator::identity(self.n_qubits));
        }
        if let Some((q, p)) = self.lookup.get(s) {
            return Ok(PauliOperator::single(self.n_qubits, q, p));
        }
        match &self.graph {
            Some(adj) => self.decode_matching(adj, s),
            None => self.decode_peeling(s),
        }
    }

    fn bfs(&self, adj: &[Vec<(usize, usize)>], src: usize) -> (Vec<u32>, Vec<(usize, usize)>) {
        let mut dist = vec![u32::MAX; adj.len()];
        let mut prev = vec![(usize::MAX, usize::MAX); adj.len()];
        dist[src] = 0;
        let mut q = VecDeque::from([src]);
        while let Some(u) = q.pop_front() {
            for &(v, e) in &adj[u] {
                if dist[v] == u32::MAX {
                    dist[v] = dist[u] + 1;
                    prev[v] = (u, e);
                    q.push_back(v);
                }
            }
        }
        (dist, prev)
    }

    fn decode_matching(&self, adj: &[Vec<(usize, usize)>], s: &Bits) -> Result<PauliOperator> {
        let defects: Vec<usize> = s.iter_ones().collect();
        if defects.len() % 2 == 1 {
            return Err(FqError::DecoderBug(format!(
                "odd defect count {} on a matching graph",
                defects.len()
            )));
        }
        let trees: Vec<(Vec<u32>, Vec<(usize, usize)>)> =
            defects.iter().map(|&d| self.bfs(adj, d)).collect();
        let k = defects.len();
        let dist = |i: usize, j: usize| trees[i].0[defects[j]];
        if (0..k).any(|i| (0..k).any(|j| dist(i, j) == u32::MAX)) {
            return Err(FqError::DecoderBug("disconnected syndrome graph".into()));
        }
        let pairs = if k <= EXACT_MATCHING_LIMIT {
            exact_matching(k, &dist)
        } else {
            greedy_matching(k, &dist)
        };
        let mut used = Vec::new();
        for (i, j) in pairs {
            let prev = &trees[i].1;
            let mut v = defects[j];
            while v != defects[i] {
                let (u, e) = prev[v];
                used.push(e);
                v = u;
            }
        }
        Ok(self.op_of(used))
    }

    fn decode_peeling(&self, s: &Bits) -> Result<PauliOperator> {
        let mut fired = s.clone();
        let mut used: Vec<usize> = Vec::new();
        loop {
            let mut best: Option<(i64, usize)> = None;
            for c in fired.iter_ones() {
                for &i in &self.touching[c] {
                    let syn = &self.singles[i].syndrome;
                    let hit = syn.iter().filter(|&&b| fired.get(b)).count() as i64;
                    let gain = 2 * hit - syn.len() as i64;
                    if gain > 0 && best.is_none_or(|(g, j)| gain > g || (gain == g && i < j)) {
                        best = Some((gain, i));
                    }
                }
            }
            let Some((_, i)) = best else { break };
            for &b in &self.singles[i].syndrome {
                fired.flip(b);
            }
            used.push(i);
            if fired.is_zero() {
                return Ok(self.op_of(used));
            }
        }
        // Local linear solve over singles on qubits of the remaining checks.
        let mut cand: Vec<usize> = fired
            .iter_ones()
            .flat_map(|c| self.touching[c].iter().copied())
            .collect();
        cand.sort_unstable();
        cand.dedup();
        let rows = cand
            .iter()
            .map(|&i| Bits::from_indices(self.n_checks, self.singles[i].syndrome.iter().copied()));
        let local = RowReducer::new(self.n_checks, rows);
        let combo = match local.solve(&fired) {
            Some(c) => c.iter_ones().map(|j| cand[j]).collect::<Vec<_>>(),
            None => self
                .global
                .solve(&fired)
                .ok_or_else(|| FqError::DecoderBug("syndrome outside the image of single-qubit errors".into()))?
                .iter_ones()
                .collect(),
        };
        used.extend(combo);
        Ok(self.op_of(used))
    }
}

fn exact_matching(k: usize, dist: &dyn Fn(usize, usize) -> u32) -> Vec<(usize, usize)> {
    let full = (1usize << k) - 1;
    let mut best = vec![u32::MAX; 1 << k];
    let mut choice = vec![(0usize, 0usize); 1 << k];
    best[0] = 0;
    for mask in 1..=full {
        if mask.count_ones() % 2 == 1 {
            continue;
        }
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut r = rest;
        while r != 0 {
            let j = r.trailing_zeros() as usize;
            r &= r - 1;
            let sub = rest & !(1 << j);
            if best[sub] != u32::MAX {
                let c = best[sub] + dist(i, j);
                if c < best[mask] {
                    best[mask] = c;
                    choice[mask] = (i, j);
                }
            }
        }
    }
    let mut out = Vec::new();
    let mut mask = full;
    while mask != 0 {
        let (i, j) = choice[mask];
        out.push((i, j));
        mask &= !(1 << i) & !(1 << j);
    }
    out
}

fn greedy_matching(k: usize, dist: &dyn Fn(usize, usize) -> u32) -> Vec<(usize, usize)> {
    let mut edges: Vec<(u32, usize, usize)> = (0..k)
        .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
        .map(|(i, j)| (dist(i, j), i, j))
        .collect();
    edges.sort_unstable();
    let mut done = vec![false; k];
    let mut out = Vec::new();
    for (_, i, j) in edges {
        if !done[i] && !done[j] {
            done[i] = true;
            done[j] = true;
            out.push((i, j));
        }
    }
    out
}

/// Inner stage: a correction clearing the vertex-stabilizer syndrome `s`.
pub fn inner_decode(decoder: &InnerDecoder, s: &Bits) -> Result<PauliOperator> {
    decoder.decode(s)
}

/// For each padding vertex carrying exactly one Majorana factor, multiply by
/// its `γ_p`. Returns the fixed residual and the applied correction.
pub fn padding_fix(residual: &MajoranaMonomial, code: &ConcatenatedCode) -> (MajoranaMonomial, MajoranaMonomial) {
    let l = code.lattice();
    let mut fixed = residual.clone();
    let mut corr = MajoranaMonomial::identity(residual.n_vertices());
    for &p in &code.padding {
        let i = l.vertex_index(p);
        if residual.has(Flavor::Gamma, i) != residual.has(Flavor::GammaTilde, i) {
            fixed.toggle(Flavor::Gamma, i);
            corr.toggle(Flavor::Gamma, i);
        }
        // γ_p γ̃_p is the padding stabilizer.
        if fixed.has(Flavor::Gamma, i) && fixed.has(Flavor::GammaTilde, i) {
            fixed.toggle(Flavor::Gamma, i);
            fixed.toggle(Flavor::GammaTilde, i);
        }
    }
    (fixed, corr)
}

/// Exhaustive maximum likelihood is used up to this block distance.
pub const EXHAUSTIVE_BLOCK_LIMIT: usize = 5;

#[derive(Clone, Debug)]
enum BlockStrategy {
    /// Per syndrome and parity class: best pattern and log-likelihood.
    Exhaustive(Vec<[(u64, f64); 2]>),
    /// Greedy syndrome cover, then plaquette descent for both classes.
    Greedy { solver: RowReducer, signatures: Vec<Bits> },
}

/// Decoder for one flavour of a color-code block; both flavours share it.
#[derive(Clone, Debug)]
pub struct BlockDecoder {
    n_vertices: usize,
    plaquettes: Vec<Bits>,
    side: Bits,
    beta: f64,
    strategy: BlockStrategy,
}

/// Outcome of decoding one flavour of one block.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockDecision {
    pub correction: Bits,
    /// Best correction of the other logical class.
    pub alternative: Bits,
    /// Log-likelihood margin of `correction` over `alternative` (≥ 0).
    pub margin: f64,
}

impl BlockDecoder {
    /// `q` is the per-Majorana error probability assumed by the likelihoods.
    pub fn new(block: &ColorCodeBlock, q: f64) -> Self {
        let n = block.n_vertices();
        let q = q.clamp(1e-9, 0.45);
        let beta = ((1.0 - q) / q).ln();
        let plaquettes: Vec<Bits> = block
            .plaquettes()
            .iter()
            .map(|p| Bits::from_indices(n, p.vertices.iter().copied()))
            .collect();
        let side = Bits::from_indices(n, block.sides()[0].iter().copied());
        let strategy = if block.d() <= EXHAUSTIVE_BLOCK_LIMIT {
            BlockStrategy::Exhaustive(exhaustive_table(n, &plaquettes, beta))
        } else {
            let signatures: Vec<Bits> = (0..n)
                .map(|v| Bits::from_bools(&plaquettes.iter().map(|p| p.get(v)).collect::<Vec<_>>()))
                .collect();
            BlockStrategy::Greedy {
                solver: RowReducer::new(plaquettes.len(), signatures.iter().cloned()),
                signatures,
            }
        };
        Self {
            n_vertices: n,
            plaquettes,
            side,
            beta,
            strategy,
        }
    }

    pub fn is_exhaustive(&self) -> bool {
        matches!(self.strategy, BlockStrategy::Exhaustive(_))
    }

    pub fn syndrome(&self, residual: &Bits) -> Bits {
        Bits::from_bools(&self.plaquettes.iter().map(|p| p.dot(residual)).collect::<Vec<_>>())
    }

    pub fn decode(&self, residual: &Bits) -> BlockDecision {
        let s = self.syndrome(residual);
        match &self.strategy {
            BlockStrategy::Exhaustive(table) => {
                let key = s.iter_ones().fold(0usize, |acc, i| acc | (1 << i));
                let [(r0, l0), (r1, l1)] = table[key];
                let to_bits = |m: u64| Bits::from_indices(self.n_vertices, (0..64).filter(|i| m >> i & 1 == 1));
                let (best, alt, margin) = if l0 >= l1 { (r0, r1, l0 - l1) } else { (r1, r0, l1 - l0) };
                BlockDecision {
                    correction: to_bits(best),
                    alternative: to_bits(alt),
                    margin,
                }
            }
            BlockStrategy::Greedy { solver, signatures } => {
                let base = self.cover(&s, solver, signatures);
                let a = self.descend(base.clone());
                let b = self.descend(base.xor(&self.side));
                let (wa, wb) = (a.count_ones(), b.count_ones());
                let (best, alt) = if wa <= wb { (a, b) } else { (b, a) };
                let margin = self.beta * (wa.abs_diff(wb)) as f64;
                BlockDecision {
                    correction: best,
                    alternative: alt,
                    margin,
                }
            }
        }
    }

    /// Flip the vertex that clears the most syndrome until none helps; the
    /// remainder is solved linearly.
    fn cover(&self, s: &Bits, solver: &RowReducer, signatures: &[Bits]) -> Bits {
        let mut rest = s.clone();
        let mut out = Bits::zeros(self.n_vertices);
        while !rest.is_zero() {
            let gain = |sig: &Bits| 2 * sig.and(&rest).count_ones() as i64 - sig.count_ones() as i64;
            let Some((v, g)) = signatures
                .iter()
                .enumerate()
                .map(|(v, sig)| (v, gain(sig)))
                .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
            else {
                break;
            };
            if g <= 0 {
                break;
            }
            out.flip(v);
            rest.xor_assign(&signatures[v]);
        }
        if !rest.is_zero() {
            out.xor_assign(&solver.solve(&rest).expect("every plaquette syndrome is reachable"));
        }
        out
    }

    fn descend(&self, mut r: Bits) -> Bits {
        loop {
            let mut improved = false;
            for p in &self.plaquettes {
                let c = r.xor(p);
                if c.count_ones() < r.count_ones() {
                    r = c;
                    improved = true;
                }
            }
            if improved {
                continue;
            }
            // Pairs of overlapping plaquettes.
            'pairs: for (i, a) in self.plaquettes.iter().enumerate() {
                for b in &self.plaquettes[i + 1..] {
                    if a.and(b).is_zero() {
                        continue;
                    }
                    let c = r.xor(a).xor(b);
                    if c.count_ones() < r.count_ones() {
                        r = c;
                        improved = true;
                        break 'pairs;
                    }
                }
            }
            if !improved {
                return r;
            }
        }
    }
}

fn exhaustive_table(n: usize, plaquettes: &[Bits], beta: f64) -> Vec<[(u64, f64); 2]> {
    let np = plaquettes.len();
    // Syndrome contribution of each vertex as a mask over plaquettes.
    let vmask: Vec<usize> = (0..n)
        .map(|v| {
            plaquettes
                .iter()
                .enumerate()
                .filter(|(_, p)| p.get(v))
                .fold(0usize, |acc, (i, _)| acc | (1 << i))
        })
        .collect();
    let mut best: Vec<[(u64, u32); 2]> = vec![[(u64::MAX, u32::MAX); 2]; 1 << np];
    let mut sums: Vec<[Vec<u64>; 2]> = vec![[vec![0; n + 1], vec![0; n + 1]]; 1 << np];
    let mut syn = 0usize;
    let mut pattern = 0u64;
    for i in 0u64..(1u64 << n) {
        if i > 0 {
            let v = i.trailing_zeros() as usize;
            pattern ^= 1 << v;
            syn ^= vmask[v];
        }
        let w = pattern.count_ones();
        let cls = (w % 2) as usize;
        sums[syn][cls][w as usize] += 1;
        let slot = &mut best[syn][cls];
        if w < slot.1 || (w == slot.1 && pattern < slot.0) {
            *slot = (pattern, w);
        }
    }
    (0..1 << np)
        .map(|s| {
            [0, 1].map(|c| {
                let counts = &sums[s][c];
                // log Σ_w count_w · e^{-β w}
                let terms: Vec<f64> = counts
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(w, &k)| (k as f64).ln() - beta * w as f64)
                    .collect();
                let m = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let ll = m + terms.iter().map(|t| (t - m).exp()).sum::<f64>().ln();
                (best[s][c].0, ll)
            })
        })
        .collect()
}

/// Block-local correction for a residual restricted to one block.
pub fn block_decode(residual: &Bits, decoder: &BlockDecoder) -> Bits {
    decoder.decode(residual).correction
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialOutcome {
    /// Blocks whose `γ^L` failed.
    pub gamma: Vec<usize>,
    /// Blocks whose `γ̃^L` failed.
    pub gamma_tilde: Vec<usize>,
    pub sector_flip: bool,
}

/// Result of one trial: the independent per-block decisions and the
/// classification of the physically applied, parity-completed correction.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialResult {
    pub blocks: TrialOutcome,
    pub physical: TrialOutcome,
}

impl TrialOutcome {
    fn from_bits(x: &Bits, sector_flip: bool) -> Self {
        Self {
            gamma: x.iter_ones().filter(|u| u % 2 == 0).map(|u| u / 2).collect(),
            gamma_tilde: x.iter_ones().filter(|u| u % 2 == 1).map(|u| u / 2).collect(),
            sector_flip,
        }
    }

    pub fn is_success(&self) -> bool {
        self.gamma.is_empty() && self.gamma_tilde.is_empty() && !self.sector_flip
    }

    pub fn fermionic_failure(&self) -> bool {
        !self.gamma.is_empty() || !self.gamma_tilde.is_empty()
    }
}

/// Everything a trial needs, precomputed once per code.
pub struct ConcatenatedDecoder<'a> {
    code: &'a ConcatenatedCode,
    inner: InnerDecoder,
    block: BlockDecoder,
    stabilizers: Vec<PauliOperator>,
    sector_ops: Vec<PauliOperator>,
    cycles: Vec<PauliOperator>,
    /// `sector_cycle[j]` = identity cycles anticommuting with sector op `j`.
    sector_cycle: Vec<Bits>,
    trivial: RowReducer,
    block_vertices: Vec<Vec<usize>>,
    sides: [Vec<MajoranaMonomial>; 2],
}

impl<'a> ConcatenatedDecoder<'a> {
    /// `q` is the per-Majorana error probability used by the block decoder.
    pub fn new(code: &'a ConcatenatedCode, q: f64) -> Result<Self> {
        let n = code.n_qubits();
        let stabilizers = code.stabilizers();
        let sector_ops: Vec<PauliOperator> = sector_generators(code)?.into_iter().map(|s| s.op).collect();
        let cycles = identity_cycles(code);
        let sector_cycle = sector_ops
            .iter()
            .map(|z| Bits::from_bools(&cycles.iter().map(|c| !c.commutes_with(z)).collect::<Vec<_>>()))
            .collect();
        let trivial = RowReducer::new(
            2 * n,
            stabilizers.iter().chain(&cycles).map(|s| s.to_symplectic()),
        );
        let block_vertices: Vec<Vec<usize>> = (0..code.n_f()).map(|b| code.block_vertex_indices(b)).collect();
        let sides = [Flavor::Gamma, Flavor::GammaTilde].map(|fl| {
            (0..code.n_f())
                .map(|b| code.lift(b, &code.block.side_logical(fl, 0)))
                .collect()
        });
        Ok(Self {
            code,
            inner: InnerDecoder::new(&code.table),
            block: BlockDecoder::new(&code.block, q),
            stabilizers,
            sector_ops,
            cycles,
            sector_cycle,
            trivial,
            block_vertices,
            sides,
        })
    }

    /// Per-Majorana error probability implied by a physical rate.
    pub fn majorana_rate(code: &ConcatenatedCode, p: f64) -> f64 {
        code.lattice().dim() as f64 * p
    }

    pub fn code(&self) -> &ConcatenatedCode {
        self.code
    }

    pub fn inner(&self) -> &InnerDecoder {
        &self.inner
    }

    pub fn block_decoder(&self) -> &BlockDecoder {
        &self.block
    }

    /// Inner correction and the residual as a Majorana monomial, with the
    /// sector operators that had to be stripped to read it.
    pub fn inner_residual(&self, error: &PauliOperator) -> Result<(PauliOperator, MajoranaMonomial, Vec<usize>)> {
        let table = &self.code.table;
        let s = syndrome_bits(error, table.vertex_stabilizers());
        let c1 = self.inner.decode(&s)?;
        let r1 = error.mul(&c1);
        let k = self.sector_ops.len();
        for combo in 0..1usize << k {
            let mut r = r1.clone();
            let used: Vec<usize> = (0..k).filter(|j| combo >> j & 1 == 1).collect();
            for &j in &used {
                r.mul_assign(&self.sector_ops[j]);
            }
            match table.pauli_to_majorana(&r)? {
                AlgebraImage::Monomial(m) => return Ok((c1, m, used)),
                AlgebraImage::Anticommutes { stabilizer } => {
                    return Err(FqError::DecoderBug(format!(
                        "inner correction leaves vertex stabilizer {stabilizer} violated"
                    )))
                }
                AlgebraImage::NontrivialCycle { .. } => {}
            }
        }
        Err(FqError::DecoderBug("residual outside the fermionic and sector algebra".into()))
    }

    /// Decode one error end to end and classify the total operator.
    pub fn decode_trial(&self, error: &PauliOperator) -> Result<TrialResult> {
        let (c1, m, _) = self.inner_residual(error)?;
        let (fixed, pad_corr) = padding_fix(&m, self.code);

        let nb = self.code.n_f();
        let mut decisions: Vec<[BlockDecision; 2]> = Vec::with_capacity(nb);
        // Failure bits: γ^L_b at 2b, γ̃^L_b at 2b+1.
        let mut failed = Bits::zeros(2 * nb);
        for (b, verts) in self.block_vertices.iter().enumerate() {
            let part = |bits: &Bits| Bits::from_bools(&verts.iter().map(|&v| bits.get(v)).collect::<Vec<_>>());
            let (g, gt) = (part(fixed.g_bits()), part(fixed.gt_bits()));
            let pair = [self.block.decode(&g), self.block.decode(&gt)];
            for (f, (r, d)) in [&g, &gt].into_iter().zip(&pair).enumerate() {
                if r.xor(&d.correction).count_ones() % 2 == 1 {
                    failed.set(2 * b + f, true);
                }
            }
            decisions.push(pair);
        }
        let blocks = TrialOutcome::from_bits(&failed, false);

        let mut parity = pad_corr.degree() % 2;
        for d in &decisions {
            parity += d[0].correction.count_ones() + d[1].correction.count_ones();
        }
        let mut applied = failed;
        if parity % 2 == 1 {
            // Flip the least confident decision so the correction is even.
            let (b, f) = (0..nb)
                .flat_map(|b| [(b, 0), (b, 1)])
                .min_by(|&(b1, f1), &(b2, f2)| {
                    decisions[b1][f1].margin.total_cmp(&decisions[b2][f2].margin)
                })
                .expect("at least one block");
            let d = &mut decisions[b][f];
            std::mem::swap(&mut d.correction, &mut d.alternative);
            applied.flip(2 * b + f);
        }

        let nv = self.code.lattice().n_vertices();
        let mut corr = pad_corr;
        for (verts, d) in self.block_vertices.iter().zip(&decisions) {
            let lift = |bits: &Bits| Bits::from_indices(nv, bits.iter_ones().map(|i| verts[i]));
            corr.mul_assign(&MajoranaMonomial::from_bits(lift(&d[0].correction), lift(&d[1].correction))?);
        }
        let c2 = self.code.table.majorana_to_pauli(&corr)?;
        let total = error.mul(&c1).mul(&c2);
        let (x, sector_flip) = self.classify_bits(&total)?;
        let complement = applied.xor(&Bits::from_indices(2 * nb, 0..2 * nb));
        if x != applied && x != complement {
            return Err(FqError::DecoderBug(
                "applied correction disagrees with the logical classification".into(),
            ));
        }
        Ok(TrialResult {
            blocks: TrialOutcome {
                sector_flip,
                ..blocks
            },
            physical: TrialOutcome::from_bits(&x, sector_flip),
        })
    }

    /// Classify an operator that commutes with every stabilizer.
    pub fn classify(&self, total: &PauliOperator) -> Result<TrialOutcome> {
        let (x, sector_flip) = self.classify_bits(total)?;
        Ok(TrialOutcome::from_bits(&x, sector_flip))
    }

    /// Minimal logical failure bits and sector flip of `total`.
    fn classify_bits(&self, total: &PauliOperator) -> Result<(Bits, bool)> {
        if let Some(i) = self.stabilizers.iter().position(|s| !s.commutes_with(total)) {
            return Err(FqError::DecoderBug(format!("total operator violates stabilizer {i}")));
        }
        let cyc = Bits::from_bools(&self.cycles.iter().map(|c| !c.commutes_with(total)).collect::<Vec<_>>());
        let k = self.sector_ops.len();
        let combo = (0..1usize << k)
            .find(|combo| {
                let mut acc = Bits::zeros(self.cycles.len());
                for j in (0..k).filter(|j| combo >> j & 1 == 1) {
                    acc.xor_assign(&self.sector_cycle[j]);
                }
                acc == cyc
            })
            .ok_or_else(|| FqError::DecoderBug("sector content not resolvable".into()))?;
        let mut t = total.clone();
        for j in (0..k).filter(|j| combo >> j & 1 == 1) {
            t.mul_assign(&self.sector_ops[j]);
        }

        // Unknowns: γ^L_b at 2b, γ̃^L_b at 2b+1; one equation per logical.
        let nf = self.code.n_f();
        let logicals = &self.code.logicals;
        let rhs = Bits::from_bools(&logicals.iter().map(|l| !l.op.commutes_with(&t)).collect::<Vec<_>>());
        let cols = (0..2 * nf).map(|u| {
            Bits::from_bools(
                &logicals
                    .iter()
                    .map(|l| {
                        let b = u / 2;
                        if u % 2 == 0 {
                            l.logical.has(Flavor::Gamma, b)
                        } else {
                            l.logical.has(Flavor::GammaTilde, b)
                        }
                    })
                    .collect::<Vec<_>>(),
            )
        });
        let solver = RowReducer::new(logicals.len(), cols);
        let mut x = solver
            .solve(&rhs)
            .ok_or_else(|| FqError::DecoderBug("logical commutation pattern has no solution".into()))?;
        if 2 * x.count_ones() > 2 * nf {
            x = x.xor(&Bits::from_indices(2 * nf, 0..2 * nf));
        }
        if x.count_ones() % 2 == 1 {
            return Err(FqError::DecoderBug("odd logical content".into()));
        }
        let nv = self.code.lattice().n_vertices();
        let mut f = MajoranaMonomial::identity(nv);
        for u in x.iter_ones() {
            f.mul_assign(&self.sides[u % 2][u / 2]);
        }
        let p = self.code.table.majorana_to_pauli(&f)?;
        if !self.trivial.contains(&t.mul(&p).to_symplectic()) {
            return Err(FqError::DecoderBug("total operator not in the identified logical coset".into()));
        }
        Ok((x, combo != 0))
    }
}

/// Classify `total` (error times every correction) against `code`.
pub fn classify_outcome(total: &PauliOperator, decoder: &ConcatenatedDecoder) -> Result<TrialOutcome> {
    decoder.classify(total)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecoderStats {
    pub d_fq: usize,
    pub d_ff: usize,
    pub n_f: usize,
    pub noise: NoiseKind,
    pub p: f64,
    pub trials: u64,
    pub seed: u64,
    pub gamma_failures: u64,
    pub gamma_tilde_failures: u64,
    /// Trials with at least one block failure.
    pub global_failures: u64,
    /// Trials with at least one block failure or a sector flip.
    pub global_failures_with_sector: u64,
    pub sector_flips: u64,
    /// Trials whose applied correction left a fermionic logical error.
    pub physical_failures: u64,
    pub per_block: Vec<[u64; 2]>,
    pub aborts: u64,
    pub first_abort: Option<String>,
}

impl DecoderStats {
    fn empty(code: &ConcatenatedCode, model: &NoiseModel, seed: u64) -> Self {
        Self {
            d_fq: code.params.d_fq,
            d_ff: code.params.d_ff,
            n_f: code.n_f(),
            noise: model.kind,
            p: model.p,
            trials: 0,
            seed,
            gamma_failures: 0,
            gamma_tilde_failures: 0,
            global_failures: 0,
            global_failures_with_sector: 0,
            sector_flips: 0,
            physical_failures: 0,
            per_block: vec![[0, 0]; code.n_f()],
            aborts: 0,
            first_abort: None,
        }
    }

    fn record(&mut self, r: Result<TrialResult>) {
        self.trials += 1;
        match r {
            Ok(TrialResult { blocks: o, physical }) => {
                self.physical_failures += u64::from(physical.fermionic_failure());
                self.gamma_failures += o.gamma.len() as u64;
                self.gamma_tilde_failures += o.gamma_tilde.len() as u64;
                for &b in &o.gamma {
                    self.per_block[b][0] += 1;
                }
                for &b in &o.gamma_tilde {
                    self.per_block[b][1] += 1;
                }
                self.global_failures += u64::from(o.fermionic_failure());
                self.global_failures_with_sector += u64::from(!o.is_success());
                self.sector_flips += u64::from(o.sector_flip);
            }
            Err(e) => {
                self.aborts += 1;
                if self.first_abort.is_none() {
                    self.first_abort = Some(e.to_string());
                }
            }
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.trials += other.trials;
        self.gamma_failures += other.gamma_failures;
        self.gamma_tilde_failures += other.gamma_tilde_failures;
        self.global_failures += other.global_failures;
        self.global_failures_with_sector += other.global_failures_with_sector;
        self.sector_flips += other.sector_flips;
        self.physical_failures += other.physical_failures;
        for (a, b) in self.per_block.iter_mut().zip(&other.per_block) {
            a[0] += b[0];
            a[1] += b[1];
        }
        self.aborts += other.aborts;
        self.first_abort = self.first_abort.or(other.first_abort);
        self
    }

    fn per_block_rate(&self, count: u64) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            count as f64 / (self.trials as f64 * self.n_f as f64)
        }
    }

    pub fn p_b_gamma(&self) -> f64 {
        self.per_block_rate(self.gamma_failures)
    }

    pub fn p_b_gamma_tilde(&self) -> f64 {
        self.per_block_rate(self.gamma_tilde_failures)
    }

    /// Per logical Majorana failure rate (γ and γ̃ pooled).
    pub fn p_b(&self) -> f64 {
        self.per_block_rate(self.gamma_failures + self.gamma_tilde_failures) / 2.0
    }

    /// Number of Bernoulli samples behind [`Self::p_b`].
    pub fn p_b_samples(&self) -> u64 {
        2 * self.trials * self.n_f as u64
    }

    pub fn p_b_events(&self) -> u64 {
        self.gamma_failures + self.gamma_tilde_failures
    }

    /// Global failure rate; sector flips count only when `with_sector`.
    pub fn p_l(&self, with_sector: bool) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        let k = if with_sector {
            self.global_failures_with_sector
        } else {
            self.global_failures
        };
        k as f64 / self.trials as f64
    }

    pub fn physical_rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.physical_failures as f64 / self.trials as f64
        }
    }

    pub fn sector_rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.sector_flips as f64 / self.trials as f64
        }
    }

    /// `1 - P_L` predicted from independent logical Majorana failures.
    pub fn predicted_success(&self) -> f64 {
        (1.0 - self.p_b()).powi(2 * self.n_f as i32)
    }

    pub fn csv_row(&self, with_sector: bool) -> String {
        format!(
            "{},{},{},{},{},{:.6e},{:.6e},{:.6e},{:.6e},{}",
            self.d_fq,
            self.d_ff,
            self.n_f,
            self.p,
            self.trials,
            self.p_b_gamma(),
            self.p_b_gamma_tilde(),
            self.p_l(with_sector),
            self.sector_rate(),
            self.seed
        )
    }
}

pub const CSV_HEADER: &str = "d_fq,d_Ff,N_F,p,trials,P_b_gamma,P_b_gammatilde,P_L,sector_rate,seed";

pub fn write_csv(stats: &[DecoderStats], with_sector: bool) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for s in stats {
        out.push_str(&s.csv_row(with_sector));
        out.push('\n');
    }
    out
}

/// Parsed CSV row: `(d_fq, d_Ff, N_F, p, trials, P_b_gamma, P_b_gammatilde, P_L, sector_rate, seed)`.
pub type CsvRow = (usize, usize, usize, f64, u64, f64, f64, f64, f64, u64);

pub fn read_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == CSV_HEADER => {}
        _ => {
            return Err(FqError::Parse {
                line: 1,
                msg: "missing CSV header".into(),
            })
        }
    }
    lines
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, line)| {
            let f: Vec<&str> = line.split(',').collect();
            let bad = |msg: String| FqError::Parse { line: i + 1, msg };
            if f.len() != 10 {
                return Err(bad(format!("expected 10 fields, found {}", f.len())));
            }
            let u = |k: usize| f[k].trim().parse::<u64>().map_err(|e| bad(e.to_string()));
            let x = |k: usize| f[k].trim().parse::<f64>().map_err(|e| bad(e.to_string()));
            Ok((
                u(0)? as usize,
                u(1)? as usize,
                u(2)? as usize,
                x(3)?,
                u(4)?,
                x(5)?,
                x(6)?,
                x(7)?,
                x(8)?,
                u(9)?,
            ))
        })
        .collect()
}

/// Trials per deterministic random stream.
pub const CHUNK: u64 = 512;

/// Run `trials` decoding trials in parallel; stream `i` of the ChaCha
/// generator seeded by `seed` drives chunk `i`. `progress` receives the
/// number of finished trials after each chunk.
pub fn run_montecarlo(
    decoder: &ConcatenatedDecoder,
    model: &NoiseModel,
    trials: u64,
    seed: u64,
    progress: &(dyn Fn(u64) + Sync),
) -> DecoderStats {
    let code = decoder.code();
    let chunks = trials.div_ceil(CHUNK);
    let done = std::sync::atomic::AtomicU64::new(0);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let mut stats = DecoderStats::empty(code, model, seed);
            let len = CHUNK.min(trials - c * CHUNK);
            for _ in 0..len {
                let e = model.sample(code.n_qubits(), &mut rng);
                stats.record(decoder.decode_trial(&e));
            }
            let total = done.fetch_add(len, std::sync::atomic::Ordering::Relaxed) + len;
            progress(total);
            stats
        })
        .reduce(|| DecoderStats::empty(code, model, seed), DecoderStats::merge)
}

/// Wilson score interval at `z` standard deviations.
pub fn wilson_interval(successes: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n_f = n as f64;
    let p = successes as f64 / n_f;
    let z2 = z * z;
    let denom = 1.0 + z2 / n_f;
    let centre = (p + z2 / (2.0 * n_f)) / denom;
    let half = z * (p * (1.0 - p) / n_f + z2 / (4.0 * n_f * n_f)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaFit {
    pub alpha: f64,
    pub stderr: f64,
    /// 95% interval.
    pub ci: (f64, f64),
    pub points: Vec<(usize, f64)>,
}

/// Weighted least-squares fit of `ln P_b = c - α d_Ff` over a sweep at a
/// fixed `p`. Points with no failures are skipped.
pub fn fit_alpha(stats: &[DecoderStats]) -> Option<AlphaFit> {
    let pts: Vec<(f64, f64, f64)> = stats
        .iter()
        .filter(|s| s.p_b_events() > 0)
        .map(|s| {
            let p = s.p_b();
            let var = (1.0 - p) / (p * s.p_b_samples() as f64);
            (s.d_ff as f64, p.ln(), 1.0 / var)
        })
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let sw: f64 = pts.iter().map(|p| p.2).sum();
    let mx = pts.iter().map(|p| p.2 * p.0).sum::<f64>() / sw;
    let my = pts.iter().map(|p| p.2 * p.1).sum::<f64>() / sw;
    let sxx: f64 = pts.iter().map(|p| p.2 * (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| p.2 * (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let stderr = (1.0 / sxx).sqrt();
    let alpha = -slope;
    Some(AlphaFit {
        alpha,
        stderr,
        ci: (alpha - 1.96 * stderr, alpha + 1.96 * stderr),
        points: stats.iter().map(|s| (s.d_ff, s.p_b())).collect(),
    })
}

/// Physical rate where the `P_b` curves of two distances cross, by
/// log-log interpolation between the bracketing sweep points.
pub fn crossing_estimate(small: &[DecoderStats], large: &[DecoderStats]) -> Option<f64> {
    let mut pts: Vec<(f64, f64)> = small
        .iter()
        .filter_map(|s| {
            large
                .iter()
                .find(|l| l.p == s.p)
                .filter(|l| l.p_b() > 0.0 && s.p_b() > 0.0)
                .map(|l| (s.p, (l.p_b() / s.p_b()).ln()))
        })
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    pts.windows(2).find_map(|w| {
        let ((p0, r0), (p1, r1)) = (w[0], w[1]);
        (r0 < 0.0 && r1 >= 0.0).then(|| {
            let t = -r0 / (r1 - r0);
            (p0.ln() + t * (p1.ln() - p0.ln())).exp()
        })
    })
}

/// Density of residual Majorana pairs at lattice distance `s` (index `s`),
/// normalized by the number of vertex pairs at that distance.
pub fn residual_pair_density(
    decoder: &ConcatenatedDecoder,
    model: &NoiseModel,
    trials: u64,
    seed: u64,
    max_sep: usize,
) -> Result<Vec<f64>> {
    let code = decoder.code();
    let l = code.lattice();
    let nv = l.n_vertices();
    let mut pairs_at = vec![0u64; max_sep + 1];
    for a in 0..nv {
        for b in a + 1..nv {
            let s = l.distance(l.vertex(a), l.vertex(b));
            if s <= max_sep {
                pairs_at[s] += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; max_sep + 1];
    for _ in 0..trials {
        let e = model.sample(code.n_qubits(), &mut rng);
        let (_, m, _) = decoder.inner_residual(&e)?;
        for fl in [m.g_bits(), m.gt_bits()] {
            let vs: Vec<usize> = fl.iter_ones().collect();
            for (i, &a) in vs.iter().enumerate() {
                for &b in &vs[i + 1..] {
                    let s = l.distance(l.vertex(a), l.vertex(b));
                    if s <= max_sep {
                        counts[s] += 1;
                    }
                }
            }
        }
    }
    Ok(counts
        .iter()
        .zip(&pairs_at)
        .map(|(&c, &n)| if n == 0 { 0.0 } else { c as f64 / (n as f64 * trials as f64) })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembler::{assemble, LayoutSpec};

    #[test]
    fn zero_noise_is_identity() {
        let m = NoiseModel::new(NoiseKind::IidXz, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(m.sample(50, &mut rng).is_identity());
        assert!(NoiseModel::new(NoiseKind::Depolarizing, 1.5).is_err());
    }

    #[test]
    fn full_noise_hits_every_qubit() {
        let m = NoiseModel::new(NoiseKind::IidXz, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(m.sample(40, &mut rng).weight(), 40);
    }

    #[test]
    fn exact_matching_beats_greedy_trap() {
        // Points on a line at 0, 1, 3, 4: greedy and exact agree; at 0, 2, 3, 5
        // greedy picks (2,3) first and pays 1 + 5 = 6 against exact 2 + 2 = 4.
        let xs = [0i64, 2, 3, 5];
        let d = |i: usize, j: usize| (xs[i] - xs[j]).unsigned_abs() as u32;
        let cost = |m: &[(usize, usize)]| m.iter().map(|&(i, j)| d(i, j)).sum::<u32>();
        assert_eq!(cost(&exact_matching(4, &d)), 4);
        assert_eq!(cost(&greedy_matching(4, &d)), 6);
    }

    #[test]
    fn padding_fix_cases() {
        let code = assemble(&LayoutSpec::new_2d(3, 1, 2)).unwrap();
        let l = code.lattice();
        let p = l.vertex_index(code.padding[0]);
        let nv = l.n_vertices();
        let (f, _) = padding_fix(&MajoranaMonomial::gamma(nv, p), &code);
        assert!(f.is_identity());
        let (f, _) = padding_fix(&MajoranaMonomial::gamma_tilde(nv, p), &code);
        assert!(f.is_identity());
        let other = code.block_vertex_indices(0)[0];
        let m = MajoranaMonomial::hopping(nv, other, other);
        assert_eq!(padding_fix(&m, &code).0, m);
    }

    #[test]
    fn wilson_contains_estimate() {
        let (lo, hi) = wilson_interval(30, 1000, 1.96);
        assert!(lo < 0.03 && 0.03 < hi);
    }

    #[test]
    fn csv_round_trip() {
        let code = assemble(&LayoutSpec::new_2d(3, 1, 2)).unwrap();
        let dec = ConcatenatedDecoder::new(&code, 0.01).unwrap();
        let model = NoiseModel::new(NoiseKind::IidXz, 0.0).unwrap();
        let s = run_montecarlo(&dec, &model, 100, 3, &|_| {});
        let text = write_csv(&[s.clone()], false);
        let rows = read_csv(&text).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].4, 100);
        assert_eq!(rows[0].7, 0.0);
    }
}
