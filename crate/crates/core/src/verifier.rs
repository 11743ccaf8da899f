//! Machine checks on assembled codes: commutation structure, census,
//! logical-count accounting, sector operators, projection and distance.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::assembler::{geometric_anchor, relative_key, BlockId, ConcatenatedCode, LogicalKind};
use crate::error::{FqError, Result};
use crate::gf2::{BinaryMatrix, Bits, RowReducer};
use crate::lattice::{Axis, Edge, Lattice, Vertex};
use crate::majorana::Flavor;
use crate::pauli::{Pauli, PauliOperator};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub measured: BTreeMap<String, Value>,
    /// Always present when `passed` is false.
    pub counterexample: Option<String>,
}

impl CheckOutcome {
    fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            passed: true,
            measured: BTreeMap::new(),
            counterexample: None,
        }
    }

    fn measure(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.measured.insert(key.to_string(), value.into());
        self
    }

    fn fail(mut self, counterexample: String) -> Self {
        self.passed = false;
        self.counterexample = Some(counterexample);
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let measured: Vec<String> = c.measured.iter().map(|(k, v)| format!("{k}={v}")).collect();
            writeln!(
                f,
                "[{}] {:<28} {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                measured.join(" ")
            )?;
            if let Some(ce) = &c.counterexample {
                writeln!(f, "       counterexample: {ce}")?;
            }
        }
        Ok(())
    }
}

/// Human-readable name of stabilizer `i` in [`ConcatenatedCode::stabilizers`] order.
pub fn stabilizer_label(code: &ConcatenatedCode, i: usize) -> String {
    let ng = code.vertex_stabilizers().len();
    let np = code.padding_stabilizers.len();
    if i < ng {
        let (v, (a, b)) = code.table.stabilizer_labels()[i];
        format!("G{}{}({},{},{})", a.name(), b.name(), v.x, v.y, v.z)
    } else if i < ng + np {
        let v = code.padding[i - ng];
        format!("Wpad({},{},{})", v.x, v.y, v.z)
    } else {
        let p = &code.plaquette_stabilizers[i - ng - np];
        let b = p.block;
        let fl = match p.flavor {
            Flavor::Gamma => "g",
            Flavor::GammaTilde => "gt",
        };
        format!("P{fl}#{}@({},{},{})", p.plaquette, b.x, b.y, b.z)
    }
}

fn describe(label: &str, op: &PauliOperator) -> String {
    format!("{label} = {op:?}")
}

/// Support diameter: largest min-image Chebyshev distance between the base
/// vertices of two supported edges.
pub fn support_diameter(l: &Lattice, op: &PauliOperator) -> usize {
    let bases: Vec<Vertex> = op.support().into_iter().map(|q| l.edge(q).base).collect();
    let mut best = 0;
    for (i, &a) in bases.iter().enumerate() {
        for &b in &bases[i + 1..] {
            let d = l.displacement(a, b);
            best = best.max(d.iter().map(|c| c.unsigned_abs() as usize).max().unwrap_or(0));
        }
    }
    best
}

/// Largest stabilizer diameter a local code may have.
pub const LOCALITY_BOUND: usize = 6;

/// Run all structural checks on an assembled code.
pub fn check_code(code: &ConcatenatedCode) -> VerificationReport {
    let mut report = VerificationReport::default();
    let stabs = code.stabilizers();

    let mut c = CheckOutcome::new("stabilizers-commute").measure("generators", stabs.len());
    let bad = (0..stabs.len()).into_par_iter().find_map_first(|i| {
        (i + 1..stabs.len())
            .find(|&j| !stabs[i].commutes_with(&stabs[j]))
            .map(|j| (i, j))
    });
    if let Some((i, j)) = bad {
        c = c.fail(format!(
            "{}; {}",
            describe(&stabilizer_label(code, i), &stabs[i]),
            describe(&stabilizer_label(code, j), &stabs[j])
        ));
    }
    report.checks.push(c);

    let mut c = CheckOutcome::new("logicals-commute").measure("logicals", code.logicals.len());
    'outer: for lg in &code.logicals {
        for (i, s) in stabs.iter().enumerate() {
            if !lg.op.commutes_with(s) {
                c = c.fail(format!(
                    "{}; {}",
                    describe(&lg.label(), &lg.op),
                    describe(&stabilizer_label(code, i), s)
                ));
                break 'outer;
            }
        }
    }
    report.checks.push(c);

    let mut c = CheckOutcome::new("logical-algebra");
    let mut pairs = 0usize;
    'alg: for (i, a) in code.logicals.iter().enumerate() {
        for b in &code.logicals[i + 1..] {
            pairs += 1;
            if a.op.commutes_with(&b.op) == a.logical.anticommutes_with(&b.logical) {
                c = c.fail(format!(
                    "{} vs {}: Pauli commute={}, fermionic anticommute={}",
                    describe(&a.label(), &a.op),
                    describe(&b.label(), &b.op),
                    a.op.commutes_with(&b.op),
                    a.logical.anticommutes_with(&b.logical)
                ));
                break 'alg;
            }
        }
    }
    report.checks.push(c.measure("pairs", pairs));

    let expected = 2 * code.lattice().dim();
    let mut c = CheckOutcome::new("padding-weight")
        .measure("padding", code.padding.len())
        .measure("expected_weight", expected);
    if let Some((v, p)) = code
        .padding
        .iter()
        .zip(&code.padding_stabilizers)
        .find(|(_, p)| p.weight() != expected)
    {
        c = c.fail(describe(&format!("Wpad{v:?}"), p));
    }
    report.checks.push(c);

    let diam: Vec<usize> = stabs
        .par_iter()
        .map(|s| support_diameter(code.lattice(), s))
        .collect();
    let (imax, dmax) = diam
        .iter()
        .copied()
        .enumerate()
        .max_by_key(|&(_, d)| d)
        .unwrap_or((0, 0));
    let mut c = CheckOutcome::new("locality")
        .measure("max_stabilizer_diameter", dmax)
        .measure("bound", LOCALITY_BOUND);
    if dmax > LOCALITY_BOUND {
        c = c.fail(describe(&stabilizer_label(code, imax), &stabs[imax]));
    }
    report.checks.push(c);

    let census = footprint_census(code);
    let full = code.spec.d_ff >= 5 && code.embeddings.iter().any(|e| e.block.y % 2 == 1);
    let mut c = CheckOutcome::new("footprint-census")
        .measure("classes", census.classes.len())
        .measure("pauli_footprints", census.pauli_footprints);
    let ok = if full {
        census.classes.len() == 6
    } else {
        census.classes.len() <= 6
    };
    if !ok {
        let ex: Vec<String> = census
            .classes
            .iter()
            .map(|k| format!("{:?}#{}({}/{})", k.block, k.plaquette, k.weight_gamma, k.weight_gamma_tilde))
            .collect();
        c = c.fail(format!("classes: {}", ex.join(", ")));
    }
    report.checks.push(c);

    let acc = logical_accounting(code);
    let mut c = CheckOutcome::new("logical-accounting")
        .measure("n_qubits", acc.n_qubits)
        .measure("rank", acc.rank)
        .measure("n_f", acc.n_f)
        .measure("n_sector", acc.n_sector)
        .measure("fermionic_rank", acc.fermionic_rank)
        .measure("sector_pairs", acc.sector_pairs);
    if !acc.consistent() {
        c = c.fail(format!("{acc:?}"));
    }
    report.checks.push(c);

    let mut c = CheckOutcome::new("sector-operators");
    match sector_generators(code) {
        Ok(sectors) => {
            c = c.measure("count", sectors.len()).measure(
                "weights",
                sectors.iter().map(|s| s.op.weight()).collect::<Vec<_>>(),
            );
            if let Some((s, why)) = sectors
                .iter()
                .find_map(|s| check_sector(code, &stabs, s).err().map(|why| (s, why)))
            {
                c = c.fail(format!("{} ({why}): {:?}", s.label(), s.op));
            }
        }
        Err(e) => c = c.fail(e.to_string()),
    }
    report.checks.push(c);

    report
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogicalAccounting {
    pub n_qubits: usize,
    pub rank: usize,
    pub n_f: usize,
    /// `n_qubits - rank - n_f`.
    pub n_sector: i64,
    /// Rank of the fermionic logical images modulo the stabilizer group.
    pub fermionic_rank: usize,
    /// Independent sector logical pairs (loops with their conjugate
    /// identity-image cycles) modulo stabilizers and fermionic logicals.
    pub sector_pairs: usize,
}

impl LogicalAccounting {
    /// Fermionic logicals span `N_F - 1` qubits (total parity is a
    /// stabilizer); the remaining logical qubits are sector qubits.
    pub fn consistent(&self) -> bool {
        let k = self.n_qubits as i64 - self.rank as i64;
        self.fermionic_rank == 2 * (self.n_f.saturating_sub(1))
            && k == (self.n_f as i64 - 1) + self.sector_pairs as i64
            && self.n_sector == k - self.n_f as i64
    }
}

fn rank_of(ops: &[&PauliOperator], n: usize) -> usize {
    RowReducer::new(2 * n, ops.iter().map(|o| o.to_symplectic())).rank()
}

pub fn logical_accounting(code: &ConcatenatedCode) -> LogicalAccounting {
    let n = code.n_qubits();
    let stabs = code.stabilizers();
    let s: Vec<&PauliOperator> = stabs.iter().collect();
    let rank = rank_of(&s, n);
    let mut with_f = s.clone();
    with_f.extend(code.logicals.iter().map(|l| &l.op));
    let rank_f = rank_of(&with_f, n);
    let sector = sector_algebra(code).unwrap_or_default();
    let mut all = with_f.clone();
    all.extend(sector.iter());
    let rank_all = rank_of(&all, n);
    LogicalAccounting {
        n_qubits: n,
        rank,
        n_f: code.n_f(),
        n_sector: n as i64 - rank as i64 - code.n_f() as i64,
        fermionic_rank: rank_f - rank,
        sector_pairs: (rank_all - rank_f) / 2,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SectorKind {
    /// Winding Z loop in 2D; `axis` is the winding direction.
    Loop,
    /// Closed Z membrane in 3D; `axis` is its normal.
    Membrane,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectorOperator {
    pub kind: SectorKind,
    pub axis: Axis,
    pub op: PauliOperator,
}

impl SectorOperator {
    pub fn label(&self) -> String {
        match self.kind {
            SectorKind::Loop => format!("Zloop-{}", self.axis.name()),
            SectorKind::Membrane => format!("Zmembrane-{}", self.axis.name()),
        }
    }

    /// Smallest weight a member of this homology class can have.
    pub fn min_weight(&self, l: &Lattice) -> usize {
        match self.kind {
            SectorKind::Loop => l.size(self.axis),
            SectorKind::Membrane => l
                .axes()
                .iter()
                .filter(|&&a| a != self.axis)
                .map(|&a| l.size(a))
                .product(),
        }
    }
}

fn check_sector(
    code: &ConcatenatedCode,
    stabs: &[PauliOperator],
    s: &SectorOperator,
) -> std::result::Result<(), String> {
    if let Some(i) = stabs.iter().position(|g| !g.commutes_with(&s.op)) {
        return Err(format!("anticommutes with {}", stabilizer_label(code, i)));
    }
    let n = code.n_qubits();
    let reducer = RowReducer::new(2 * n, stabs.iter().map(|g| g.to_symplectic()));
    if reducer.contains(&s.op.to_symplectic()) {
        return Err("in the stabilizer row space".into());
    }
    if s.op.weight() < s.min_weight(code.lattice()) {
        return Err(format!("weight {} below side length", s.op.weight()));
    }
    Ok(())
}

/// Edges carrying an X or Y in some plaquette-type stabilizer, as in-plane
/// `(axis, x, y)` triples (layers merged).
fn blocked_edges(code: &ConcatenatedCode) -> std::collections::HashSet<(Axis, usize, usize)> {
    let l = code.lattice();
    code.plaquette_stabilizers
        .iter()
        .flat_map(|p| p.op.x_bits().iter_ones().collect::<Vec<_>>())
        .map(|q| {
            let e = l.edge(q);
            (e.axis, e.base.x, e.base.y)
        })
        .collect()
}

/// Shortest dual cycle in the `x`-`y` plane winding once (mod 2) along
/// `axis`, avoiding `blocked` primal edges. Returns crossed edges as
/// in-plane `(axis, x, y)` triples.
fn dual_cycle(
    lx: usize,
    ly: usize,
    axis: Axis,
    blocked: &std::collections::HashSet<(Axis, usize, usize)>,
) -> Option<Vec<(Axis, usize, usize)>> {
    // Face (x, y) spans [x, x+1] × [y, y+1]. State = face + winding parities.
    let idx = |x: usize, y: usize, wx: usize, wy: usize| ((y * lx + x) * 2 + wx) * 2 + wy;
    let target = match axis {
        Axis::X => (1, 0),
        _ => (0, 1),
    };
    let mut best: Option<Vec<(Axis, usize, usize)>> = None;
    let starts: Vec<(usize, usize)> = match axis {
        Axis::X => (0..ly).map(|y| (0, y)).collect(),
        _ => (0..lx).map(|x| (x, 0)).collect(),
    };
    for (sx, sy) in starts {
        let mut prev: Vec<Option<(usize, (Axis, usize, usize))>> = vec![None; lx * ly * 4];
        let mut seen = vec![false; lx * ly * 4];
        let start = idx(sx, sy, 0, 0);
        seen[start] = true;
        let mut queue = VecDeque::from([(sx, sy, 0usize, 0usize)]);
        let goal = idx(sx, sy, target.0, target.1);
        while let Some((x, y, wx, wy)) = queue.pop_front() {
            if idx(x, y, wx, wy) == goal {
                break;
            }
            let here = idx(x, y, wx, wy);
            let moves = [
                // (+x): crosses the y-edge at (x+1, y).
                ((x + 1) % lx, y, wx ^ usize::from(x + 1 == lx), wy, (Axis::Y, (x + 1) % lx, y)),
                ((x + lx - 1) % lx, y, wx ^ usize::from(x == 0), wy, (Axis::Y, x, y)),
                (x, (y + 1) % ly, wx, wy ^ usize::from(y + 1 == ly), (Axis::X, x, (y + 1) % ly)),
                (x, (y + ly - 1) % ly, wx, wy ^ usize::from(y == 0), (Axis::X, x, y)),
            ];
            for (nx, ny, nwx, nwy, crossed) in moves {
                let j = idx(nx, ny, nwx, nwy);
                if seen[j] || blocked.contains(&crossed) {
                    continue;
                }
                seen[j] = true;
                prev[j] = Some((here, crossed));
                queue.push_back((nx, ny, nwx, nwy));
            }
        }
        if !seen[goal] {
            continue;
        }
        let mut path = Vec::new();
        let mut cur = goal;
        while cur != start {
            let (p, e) = prev[cur].expect("reachable");
            path.push(e);
            cur = p;
        }
        if best.as_ref().is_none_or(|b| path.len() < b.len()) {
            best = Some(path);
        }
    }
    best
}

/// Winding Z loops (2D) or Z membranes (3D) routed through the gaps between
/// block plaquettes; falls back to a kernel solve when no corridor exists.
pub fn sector_generators(code: &ConcatenatedCode) -> Result<Vec<SectorOperator>> {
    let l = code.lattice();
    let n = l.n_edges();
    let [lx, ly, lz] = l.sizes();
    let blocked = blocked_edges(code);
    let mut out = Vec::new();
    for winding in [Axis::X, Axis::Y] {
        let edges = match dual_cycle(lx, ly, winding, &blocked) {
            Some(e) => e,
            None => {
                out.push(kernel_sector(code, winding)?);
                continue;
            }
        };
        let mut op = PauliOperator::identity(n);
        for z in 0..lz {
            for &(a, x, y) in &edges {
                op.apply(l.edge_index(Edge::new(a, Vertex::new(x, y, z))), Pauli::Z);
            }
        }
        let (kind, axis) = if l.dim() == 2 {
            (SectorKind::Loop, winding)
        } else {
            // A loop winding along x, extruded along z, has normal y.
            (SectorKind::Membrane, if winding == Axis::X { Axis::Y } else { Axis::X })
        };
        out.push(SectorOperator { kind, axis, op });
    }
    if l.dim() == 3 {
        let op = PauliOperator::from_xz(
            n,
            [],
            (0..lx).flat_map(|x| (0..ly).map(move |y| (x, y))).map(|(x, y)| {
                l.edge_index(Edge::new(Axis::Z, Vertex::new(x, y, lz - 1)))
            }),
        );
        out.push(SectorOperator {
            kind: SectorKind::Membrane,
            axis: Axis::Z,
            op,
        });
    }
    Ok(out)
}

/// Straight cut deformed by occupation images until it commutes with every
/// stabilizer.
fn kernel_sector(code: &ConcatenatedCode, winding: Axis) -> Result<SectorOperator> {
    let l = code.lattice();
    let n = l.n_edges();
    let cross = if winding == Axis::X { Axis::Y } else { Axis::X };
    // The straight loop winding along `winding` crosses the `cross`-edges
    // at a fixed `cross` coordinate.
    let straight: Vec<usize> = l
        .vertices()
        .filter(|v| v.coord(cross) == 0)
        .map(|v| l.edge_index(Edge::new(cross, v)))
        .collect();
    let base = PauliOperator::from_xz(n, [], straight);
    let stabs = code.stabilizers();
    let target = Bits::from_bools(
        &stabs.iter().map(|s| !s.commutes_with(&base)).collect::<Vec<_>>(),
    );
    // Column j = syndrome of W at vertex j.
    let nv = l.n_vertices();
    let cols: Vec<Bits> = (0..nv)
        .map(|j| {
            let w = code.table.occupation(l.vertex(j));
            Bits::from_bools(&stabs.iter().map(|s| !s.commutes_with(w)).collect::<Vec<_>>())
        })
        .collect();
    let reducer = RowReducer::new(stabs.len(), cols);
    let combo = reducer.solve(&target).ok_or_else(|| {
        FqError::NoCorridor(format!("no {}-winding Z loop commutes with the stabilizers", winding.name()))
    })?;
    let mut op = base;
    for j in combo.iter_ones() {
        op.mul_assign(code.table.occupation(l.vertex(j)));
    }
    let (kind, axis) = if l.dim() == 2 {
        (SectorKind::Loop, winding)
    } else {
        (SectorKind::Membrane, cross)
    };
    Ok(SectorOperator { kind, axis, op })
}

/// Closed hopping loops along each lattice axis, dressed with occupations
/// so that their fermionic image is the identity.
pub fn identity_cycles(code: &ConcatenatedCode) -> Vec<PauliOperator> {
    let l = code.lattice();
    l.axes()
        .iter()
        .map(|&a| {
            let mut op = PauliOperator::identity(l.n_edges());
            let mut v = Vertex::new(0, 0, 0);
            for _ in 0..l.size(a) {
                op.mul_assign(code.table.hop(v, a));
                op.mul_assign(code.table.occupation(v));
                v = l.step(v, a.unit());
            }
            op
        })
        .collect()
}

/// Sector operators together with their conjugate identity cycles.
pub fn sector_algebra(code: &ConcatenatedCode) -> Result<Vec<PauliOperator>> {
    let mut ops: Vec<PauliOperator> = sector_generators(code)?.into_iter().map(|s| s.op).collect();
    ops.extend(identity_cycles(code));
    Ok(ops)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FootprintClass {
    pub block: BlockId,
    pub plaquette: usize,
    pub weight_gamma: usize,
    pub weight_gamma_tilde: usize,
    /// Number of plaquettes in this class.
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FootprintCensus {
    pub classes: Vec<FootprintClass>,
    /// Distinct individual stabilizer images up to translation.
    pub pauli_footprints: usize,
}

type Footprint = Vec<([i64; 3], usize, u8)>;

/// Group plaquettes by the translation class of their `(γ, γ̃)` image pair.
pub fn footprint_census(code: &ConcatenatedCode) -> FootprintCensus {
    let l = code.lattice();
    let mut pairs: BTreeMap<(BlockId, usize), [Option<(Footprint, usize)>; 2]> = BTreeMap::new();
    let mut singles = std::collections::BTreeSet::new();
    for p in &code.plaquette_stabilizers {
        let verts: Vec<Vertex> = p.monomial.support().iter_ones().map(|i| l.vertex(i)).collect();
        let key = relative_key(l, &p.op, geometric_anchor(l, &verts));
        singles.insert(key.clone());
        let slot = match p.flavor {
            Flavor::Gamma => 0,
            Flavor::GammaTilde => 1,
        };
        pairs.entry((p.block, p.plaquette)).or_default()[slot] = Some((key, p.op.weight()));
    }
    let mut classes: BTreeMap<(Footprint, Footprint), FootprintClass> = BTreeMap::new();
    for ((block, plaquette), [g, gt]) in pairs {
        let (g, gt) = (g.unwrap_or_default(), gt.unwrap_or_default());
        classes
            .entry((g.0, gt.0))
            .and_modify(|c| c.count += 1)
            .or_insert(FootprintClass {
                block,
                plaquette,
                weight_gamma: g.1,
                weight_gamma_tilde: gt.1,
                count: 1,
            });
    }
    FootprintCensus {
        classes: classes.into_values().collect(),
        pauli_footprints: singles.len(),
    }
}

/// Check that each 3D stabilizer and in-layer logical, with its z-support
/// deleted, lies in the matching 2D object's coset of the 2D vertex
/// stabilizer group. Hop-back logicals are reported only.
pub fn check_projection(c3: &ConcatenatedCode, c2: &ConcatenatedCode) -> Result<VerificationReport> {
    let (s3, s2) = (&c3.spec, &c2.spec);
    if c3.lattice().dim() != 3
        || c2.lattice().dim() != 2
        || s3.d_ff != s2.d_ff
        || s3.n_bx != s2.n_bx
        || s3.n_by != s2.n_by
    {
        return Err(FqError::InfeasibleLayout(
            "projection needs a 3D code and the 2D code of its layer layout".into(),
        ));
    }
    let l3 = c3.lattice();
    let n2 = c2.n_qubits();
    let g2 = RowReducer::new(2 * n2, c2.vertex_stabilizers().iter().map(|g| g.to_symplectic()));
    let plane = (Axis::X, Axis::Y);
    let project = |op: &PauliOperator| crate::fqmap::project_to_plane(op, l3, plane, None).1;
    let member = |p: &PauliOperator, t: &PauliOperator| g2.contains(&p.mul(t).to_symplectic());
    let flat = |b: BlockId| BlockId::new(b.x, b.y, 0);

    let mut report = VerificationReport::default();

    // Each vertex stabilizer is checked on its own plane; plaquette-type
    // stabilizers and in-layer logicals on the x-y plane.
    let mut c = CheckOutcome::new("projection-vertex-stabilizers");
    let mut tables: Vec<(crate::fqmap::Plane, crate::fqmap::MappingTable)> = Vec::new();
    for &pl in crate::fqmap::PLANES_3D.iter() {
        let l2 = Lattice::new_2d(l3.size(pl.0), l3.size(pl.1));
        tables.push((pl, crate::fqmap::MappingTable::new_2d(l2)?));
    }
    for (g, &(v, pl)) in c3.vertex_stabilizers().iter().zip(c3.table.stabilizer_labels()) {
        let (_, t2) = tables.iter().find(|(p, _)| *p == pl).expect("known plane");
        let (_, p) = crate::fqmap::project_to_plane(g, l3, pl, None);
        let target = t2
            .vertex_stabilizer(Vertex::xy(v.coord(pl.0), v.coord(pl.1)), plane)
            .expect("2D stabilizer");
        if p != *target {
            c = c.fail(format!("G{}{}{v:?} projects to {p:?}, expected {target:?}", pl.0.name(), pl.1.name()));
            break;
        }
    }
    report.checks.push(c.measure("checked", c3.vertex_stabilizers().len()));

    let mut c = CheckOutcome::new("projection-padding");
    for (v, w) in c3.padding.iter().zip(&c3.padding_stabilizers) {
        let target = c2.table.occupation(Vertex::xy(v.x, v.y));
        if !member(&project(w), target) {
            c = c.fail(format!("Wpad{v:?} projects to {:?}", project(w)));
            break;
        }
    }
    report.checks.push(c.measure("checked", c3.padding.len()));

    let mut c = CheckOutcome::new("projection-plaquettes");
    for p in &c3.plaquette_stabilizers {
        let target = c2
            .plaquette_stabilizers
            .iter()
            .find(|q| q.block == flat(p.block) && q.plaquette == p.plaquette && q.flavor == p.flavor)
            .ok_or_else(|| FqError::InfeasibleLayout(format!("2D code lacks block {:?}", p.block)))?;
        if !member(&project(&p.op), &target.op) {
            c = c.fail(format!(
                "P#{}@{:?} {:?} projects to {:?}, expected {:?}",
                p.plaquette, p.block, p.flavor, project(&p.op), target.op
            ));
            break;
        }
    }
    report.checks.push(c.measure("checked", c3.plaquette_stabilizers.len()));

    let mut c = CheckOutcome::new("projection-logicals");
    let mut in_layer = 0usize;
    let mut hop_back = Vec::new();
    for lg in &c3.logicals {
        let kind2 = match lg.kind {
            LogicalKind::Occupation { block } => LogicalKind::Occupation { block: flat(block) },
            LogicalKind::Hop { from, to, dir } => {
                if from.z != to.z {
                    let p = project(&lg.op);
                    let class = if g2.contains(&p.to_symplectic()) {
                        "vertex-stabilizer".to_string()
                    } else {
                        format!("weight {}", p.weight())
                    };
                    hop_back.push(format!("{}: {class}", lg.label()));
                    continue;
                }
                LogicalKind::Hop { from: flat(from), to: flat(to), dir }
            }
        };
        let Some(target) = c2.logicals.iter().find(|l| l.kind == kind2) else {
            continue;
        };
        in_layer += 1;
        if !member(&project(&lg.op), &target.op) {
            c = c.fail(format!("{} projects to {:?}, expected {:?}", lg.label(), project(&lg.op), target.op));
            break;
        }
    }
    report.checks.push(c.measure("checked", in_layer));
    report
        .checks
        .push(CheckOutcome::new("projection-hop-back").measure("observed", json!(hop_back)));
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceBudget {
    /// Largest weight swept exhaustively.
    pub max_weight: usize,
    /// Cap on operators enumerated per half of a sweep.
    pub max_half_combos: u64,
    /// Information-set rounds for the upper bound.
    pub isd_rounds: usize,
    pub seed: u64,
}

impl Default for DistanceBudget {
    fn default() -> Self {
        Self {
            max_weight: 12,
            max_half_combos: 40_000_000,
            isd_rounds: 64,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceEstimate {
    pub lower: usize,
    pub upper: usize,
    pub exact: bool,
    /// A nontrivial logical of weight `upper`.
    pub witness: PauliOperator,
}

/// Symplectic signatures of errors against the stabilizers (syndrome) and
/// against the commutant of stabilizers plus sector operators. An error with
/// zero syndrome and nonzero logical part acts on the fermionic logicals.
pub struct LogicalSignature {
    n: usize,
    stab_dual: Vec<Bits>,
    logical_dual: Vec<Bits>,
}

impl LogicalSignature {
    pub fn new(code: &ConcatenatedCode) -> Result<Self> {
        let n = code.n_qubits();
        let stabs = code.stabilizers();
        let sector = sector_algebra(code)?;
        let trivial = BinaryMatrix::from_rows(
            2 * n,
            stabs.iter().chain(&sector).map(|s| s.to_symplectic_dual()).collect(),
        );
        let commutant = trivial.nullspace();
        let logical_dual = commutant
            .iter()
            .map(|v| PauliOperator::from_symplectic(v).to_symplectic_dual())
            .collect();
        let stab_dual = stabs.iter().map(|s| s.to_symplectic_dual()).collect();
        Ok(Self {
            n,
            stab_dual,
            logical_dual,
        })
    }

    pub fn n_syndrome(&self) -> usize {
        self.stab_dual.len()
    }

    pub fn n_logical(&self) -> usize {
        self.logical_dual.len()
    }

    pub fn syndrome(&self, op: &PauliOperator) -> Bits {
        let v = op.to_symplectic();
        Bits::from_bools(&self.stab_dual.iter().map(|r| r.dot(&v)).collect::<Vec<_>>())
    }

    pub fn logical(&self, op: &PauliOperator) -> Bits {
        let v = op.to_symplectic();
        Bits::from_bools(&self.logical_dual.iter().map(|r| r.dot(&v)).collect::<Vec<_>>())
    }

    pub fn is_nontrivial_logical(&self, op: &PauliOperator) -> bool {
        self.syndrome(op).is_zero() && !self.logical(op).is_zero()
    }

    fn single(&self, q: usize, p: Pauli) -> (Bits, Bits) {
        let op = PauliOperator::single(self.n, q, p);
        (self.syndrome(&op), self.logical(&op))
    }
}

const PAULIS: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

fn n_combos(n: usize, k: usize) -> u64 {
    let mut c: f64 = 1.0;
    for i in 0..k {
        c *= (n - i) as f64 / (i + 1) as f64;
    }
    (c * 3f64.powi(k as i32)).round() as u64
}

/// Calls `f(qubits, paulis, syndrome, logical)` for every operator of
/// weight `k` whose lowest qubit is `first`.
fn for_each_combo<F>(
    singles: &[[(Bits, Bits); 3]],
    k: usize,
    first: usize,
    f: &mut F,
) where
    F: FnMut(&[usize], &[u8], &Bits, &Bits),
{
    fn rec<F: FnMut(&[usize], &[u8], &Bits, &Bits)>(
        singles: &[[(Bits, Bits); 3]],
        k: usize,
        qs: &mut Vec<usize>,
        ps: &mut Vec<u8>,
        syn: &Bits,
        log: &Bits,
        f: &mut F,
    ) {
        if qs.len() == k {
            f(qs, ps, syn, log);
            return;
        }
        let start = qs.last().map_or(0, |&q| q + 1);
        let need = k - qs.len();
        for q in start..=singles.len().saturating_sub(need) {
            for (pi, (s, l)) in singles[q].iter().enumerate() {
                qs.push(q);
                ps.push(pi as u8);
                rec(singles, k, qs, ps, &syn.xor(s), &log.xor(l), f);
                qs.pop();
                ps.pop();
            }
        }
    }
    if k == 0 {
        return;
    }
    let n = singles.len();
    if first + k > n {
        return;
    }
    for (pi, (s, l)) in singles[first].iter().enumerate() {
        let mut qs = vec![first];
        let mut ps = vec![pi as u8];
        rec(singles, k, &mut qs, &mut ps, s, l, f);
    }
}

fn combo_op(n: usize, qs: &[usize], ps: &[u8]) -> PauliOperator {
    let mut op = PauliOperator::identity(n);
    for (&q, &p) in qs.iter().zip(ps) {
        op.apply(q, PAULIS[p as usize]);
    }
    op
}

#[derive(Clone)]
struct HalfEntry {
    logical: Bits,
    qs: Vec<usize>,
    ps: Vec<u8>,
    /// A second entry with a different logical part, if any.
    other: Option<(Bits, Vec<usize>, Vec<u8>)>,
}

fn half_table(
    singles: &[[(Bits, Bits); 3]],
    k: usize,
    n_syn: usize,
    n_log: usize,
) -> HashMap<Bits, HalfEntry> {
    let n = singles.len();
    if k == 0 {
        let mut t = HashMap::new();
        t.insert(
            Bits::zeros(n_syn),
            HalfEntry {
                logical: Bits::zeros(n_log),
                qs: vec![],
                ps: vec![],
                other: None,
            },
        );
        return t;
    }
    let parts: Vec<HashMap<Bits, HalfEntry>> = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut t: HashMap<Bits, HalfEntry> = HashMap::new();
            for_each_combo(singles, k, first, &mut |qs, ps, syn, log| {
                merge_entry(&mut t, syn.clone(), log, qs, ps);
            });
            t
        })
        .collect();
    let mut out: HashMap<Bits, HalfEntry> = HashMap::new();
    for part in parts {
        for (syn, e) in part {
            merge_entry(&mut out, syn.clone(), &e.logical, &e.qs, &e.ps);
            if let Some((l, qs, ps)) = &e.other {
                merge_entry(&mut out, syn, l, qs, ps);
            }
        }
    }
    out
}

fn merge_entry(t: &mut HashMap<Bits, HalfEntry>, syn: Bits, log: &Bits, qs: &[usize], ps: &[u8]) {
    match t.get_mut(&syn) {
        None => {
            t.insert(
                syn,
                HalfEntry {
                    logical: log.clone(),
                    qs: qs.to_vec(),
                    ps: ps.to_vec(),
                    other: None,
                },
            );
        }
        Some(e) => {
            if e.other.is_none() && e.logical != *log {
                e.other = Some((log.clone(), qs.to_vec(), ps.to_vec()));
            }
        }
    }
}

/// Smallest weight `w <= budget.max_weight` of a nontrivial logical, found
/// by a meet-in-the-middle sweep. Returns `Err(w)` if the sweep stopped
/// before finding one, with every weight below `w` certified empty.
pub fn exhaustive_distance(
    sig: &LogicalSignature,
    budget: &DistanceBudget,
) -> std::result::Result<PauliOperator, usize> {
    let n = sig.n;
    let singles: Vec<[(Bits, Bits); 3]> = (0..n)
        .into_par_iter()
        .map(|q| PAULIS.map(|p| sig.single(q, p)))
        .collect();
    let (n_syn, n_log) = (sig.n_syndrome(), sig.n_logical());
    let mut cached: Option<(usize, HashMap<Bits, HalfEntry>)> = None;
    for w in 1..=budget.max_weight {
        let (k1, k2) = (w.div_ceil(2), w / 2);
        if n_combos(n, k1) > budget.max_half_combos {
            return Err(w);
        }
        if cached.as_ref().is_none_or(|(k, _)| *k != k2) {
            cached = Some((k2, half_table(&singles, k2, n_syn, n_log)));
        }
        let table = &cached.as_ref().expect("built").1;
        let hit = (0..n).into_par_iter().find_map_any(|first| {
            let mut found = None;
            for_each_combo(&singles, k1, first, &mut |qs, ps, syn, log| {
                if found.is_some() {
                    return;
                }
                if let Some(e) = table.get(syn) {
                    let pick = if e.logical != *log {
                        Some((&e.qs, &e.ps))
                    } else {
                        e.other.as_ref().map(|(_, q, p)| (q, p))
                    };
                    if let Some((q2, p2)) = pick {
                        found = Some(combo_op(n, qs, ps).mul(&combo_op(n, q2, p2)));
                    }
                }
            });
            found
        });
        if let Some(op) = hit {
            debug_assert!(sig.is_nontrivial_logical(&op));
            return Ok(op);
        }
    }
    Err(budget.max_weight + 1)
}

/// Lowest-weight nontrivial logical found by randomized information-set
/// elimination of the stabilizer commutant (single rows and row pairs).
pub fn isd_upper_bound(
    code: &ConcatenatedCode,
    sig: &LogicalSignature,
    budget: &DistanceBudget,
) -> Option<PauliOperator> {
    let n = code.n_qubits();
    let stabs = code.stabilizers();
    let m = BinaryMatrix::from_rows(2 * n, stabs.iter().map(|s| s.to_symplectic_dual()).collect());
    let basis = m.nullspace();
    (0..budget.isd_rounds)
        .into_par_iter()
        .filter_map(|round| {
            let mut rng = ChaCha8Rng::seed_from_u64(budget.seed ^ (round as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            // Column j of the permuted matrix is (x or z) of qubit order[j / 2].
            let col = |j: usize| if j % 2 == 0 { order[j / 2] } else { n + order[j / 2] };
            let rows: Vec<Bits> = basis
                .iter()
                .map(|v| Bits::from_bools(&(0..2 * n).map(|j| v.get(col(j))).collect::<Vec<_>>()))
                .collect();
            let rref = rref(rows);
            let ops: Vec<PauliOperator> = rref
                .iter()
                .map(|r| {
                    let mut v = Bits::zeros(2 * n);
                    for j in r.iter_ones() {
                        v.set(col(j), true);
                    }
                    PauliOperator::from_symplectic(&v)
                })
                .collect();
            let mut best: Option<PauliOperator> = None;
            let mut consider = |op: PauliOperator| {
                if best.as_ref().is_none_or(|b| op.weight() < b.weight())
                    && !op.is_identity()
                    && sig.is_nontrivial_logical(&op)
                {
                    best = Some(op);
                }
            };
            for (i, a) in ops.iter().enumerate() {
                consider(a.clone());
                for b in &ops[i + 1..] {
                    consider(a.mul(b));
                }
            }
            best
        })
        .min_by(|a, b| a.weight().cmp(&b.weight()).then_with(|| a.lex_cmp(b)))
}

fn rref(mut rows: Vec<Bits>) -> Vec<Bits> {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i].get(c)) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row.get(c) {
                row.xor_assign(&pivot);
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    rows
}

/// Bounds on the minimum weight of an operator acting nontrivially on the
/// fermionic logicals (sector operators count as trivial).
pub fn estimate_distance(code: &ConcatenatedCode, budget: &DistanceBudget) -> Result<DistanceEstimate> {
    let sig = LogicalSignature::new(code)?;
    let mut best: Option<PauliOperator> = code
        .logicals
        .iter()
        .map(|l| &l.op)
        .filter(|op| sig.is_nontrivial_logical(op))
        .min_by_key(|op| op.weight())
        .cloned();
    if let Some(op) = isd_upper_bound(code, &sig, budget) {
        if best.as_ref().is_none_or(|b| op.weight() < b.weight()) {
            best = Some(op);
        }
    }
    let exhaustive = exhaustive_distance(&sig, budget);
    let (lower, witness) = match exhaustive {
        Ok(op) => (op.weight(), op),
        Err(w) => {
            let op = best.ok_or_else(|| {
                FqError::InvariantViolation("no nontrivial logical operator found".into())
            })?;
            (w, op)
        }
    };
    let upper = witness.weight();
    Ok(DistanceEstimate {
        lower: lower.min(upper),
        upper,
        exact: lower >= upper,
        witness,
    })
}
