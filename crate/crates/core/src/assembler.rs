//! Block layout, embedding and assembly of the concatenated code.
//!
//! Blocks sit in vertical strips of width `W = (3d + 1) / 2`. Each strip
//! holds two block columns: even columns use the right-pointing block
//! drawing, odd columns its 180° rotation, shifted down by `(d - 1) / 2`
//! rows so the two triangles nest. Block `(x, y[, z])` is in block row `x`
//! (counted upward), block column `y`, layer `z`. The lattice is periodic
//! with sizes `(W * N_by / 2, d * N_bx[, N_bz])`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::color::ColorCodeBlock;
use crate::error::{FqError, Result};
use crate::fqmap::{MappingTable, Plane};
use crate::gf2::Bits;
use crate::lattice::{Axis, Edge, Lattice, Vertex};
use crate::majorana::{Flavor, MajoranaMonomial};
use crate::pauli::{
    min_weight_in_coset_by, read_check_matrix, write_check_matrix, PauliOperator, SearchBudget,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BlockId {
    pub x: usize,
    pub y: usize,
    pub z: usize,
}

impl BlockId {
    pub const fn new(x: usize, y: usize, z: usize) -> Self {
        Self { x, y, z }
    }
}

/// Drawing of a block: even columns point right, odd columns left.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    Even,
    Odd,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayoutSpec {
    pub dim: usize,
    pub d_ff: usize,
    pub d_fq: usize,
    pub n_bx: usize,
    pub n_by: usize,
    pub n_bz: usize,
    /// Block slots left empty; their vertices become padding.
    #[serde(default)]
    pub omit: Vec<BlockId>,
}

impl LayoutSpec {
    pub fn new_2d(d_ff: usize, n_bx: usize, n_by: usize) -> Self {
        Self {
            dim: 2,
            d_ff,
            d_fq: 2,
            n_bx,
            n_by,
            n_bz: 1,
            omit: Vec::new(),
        }
    }

    pub fn new_3d(d_ff: usize, n_bx: usize, n_by: usize, n_bz: usize) -> Self {
        Self {
            dim: 3,
            d_ff,
            d_fq: 3,
            n_bx,
            n_by,
            n_bz,
            omit: Vec::new(),
        }
    }

    pub fn without(mut self, block: BlockId) -> Self {
        self.omit.push(block);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.d_ff < 3 || self.d_ff % 2 == 0 {
            return Err(FqError::InvalidBlockDistance(self.d_ff));
        }
        let bad = |msg: String| Err(FqError::InfeasibleLayout(msg));
        match (self.dim, self.d_fq) {
            (2, 2) | (3, 3) => {}
            (d, q) => return bad(format!("dimension {d} requires d_fq = {}, got {q}", d)),
        }
        if self.n_bx == 0 || self.n_by == 0 || self.n_bz == 0 {
            return bad("block grid must be non-empty".into());
        }
        if self.n_by % 2 != 0 {
            return bad(format!(
                "N_by = {} must be even: strips hold one even and one odd column",
                self.n_by
            ));
        }
        if self.dim == 2 && self.n_bz != 1 {
            return bad("2D layouts have a single layer".into());
        }
        if self.dim == 3 && self.n_bz < 2 {
            return bad("3D layouts need at least two layers".into());
        }
        if self.blocks().is_empty() {
            return bad("every block slot is omitted".into());
        }
        Ok(())
    }

    pub fn strip_width(&self) -> usize {
        (3 * self.d_ff + 1) / 2
    }

    pub fn lattice_sizes(&self) -> Vec<usize> {
        let mut s = vec![self.strip_width() * self.n_by / 2, self.d_ff * self.n_bx];
        if self.dim == 3 {
            s.push(self.n_bz);
        }
        s
    }

    pub fn lattice(&self) -> Result<Lattice> {
        Lattice::with_boundary(&self.lattice_sizes(), crate::lattice::Boundary::Periodic)
    }

    /// Present blocks ordered by layer, block row, block column.
    pub fn blocks(&self) -> Vec<BlockId> {
        let omit: HashSet<BlockId> = self.omit.iter().copied().collect();
        let mut out = Vec::new();
        for z in 0..self.n_bz {
            for x in 0..self.n_bx {
                for y in 0..self.n_by {
                    let b = BlockId::new(x, y, z);
                    if !omit.contains(&b) {
                        out.push(b);
                    }
                }
            }
        }
        out
    }

    pub fn variant(&self, b: BlockId) -> Variant {
        if b.y % 2 == 0 {
            Variant::Even
        } else {
            Variant::Odd
        }
    }

    /// Lattice position of local vertex `(0, 0)`.
    pub fn anchor(&self, b: BlockId) -> Vertex {
        let d = self.d_ff;
        let m = (d - 1) / 2;
        let w = self.strip_width();
        let ly = (d * self.n_bx) as i64;
        let s = b.y / 2;
        match self.variant(b) {
            Variant::Even => Vertex::new(s * w, b.x * d + d - 1, b.z),
            Variant::Odd => {
                let ay = ((b.x * d) as i64 - m as i64).rem_euclid(ly) as usize;
                Vertex::new(s * w + w - 1, ay, b.z)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub block: BlockId,
    pub variant: Variant,
    pub anchor: Vertex,
    /// Lattice vertex of each block vertex.
    pub vertices: Vec<Vertex>,
}

/// Place `b` with local `(0, 0)` at `anchor`. The even drawing maps local
/// `(c, r)` to `anchor + (c, -r)`, the odd drawing to `anchor + (-c, r)`.
pub fn embed_block(
    b: &ColorCodeBlock,
    block: BlockId,
    anchor: Vertex,
    variant: Variant,
    l: &Lattice,
) -> Result<Embedding> {
    let sign = match variant {
        Variant::Even => 1,
        Variant::Odd => -1,
    };
    let vertices = b
        .coords()
        .iter()
        .map(|&(c, r)| {
            l.shift(anchor, [sign * c as i64, -sign * r as i64, 0])
                .ok_or_else(|| FqError::InfeasibleLayout(format!("block {block:?} leaves the lattice")))
        })
        .collect::<Result<Vec<_>>>()?;
    let distinct: HashSet<Vertex> = vertices.iter().copied().collect();
    if distinct.len() != vertices.len() {
        return Err(FqError::InfeasibleLayout(format!(
            "block {block:?} overlaps itself on a {:?} lattice",
            l.sizes()
        )));
    }
    Ok(Embedding {
        block,
        variant,
        anchor,
        vertices,
    })
}

/// Embed every block of the layout; returns the embeddings and the padding
/// vertices (lattice vertices covered by no block), sorted by index.
pub fn layout_blocks(
    spec: &LayoutSpec,
    block: &ColorCodeBlock,
    l: &Lattice,
) -> Result<(Vec<Embedding>, Vec<Vertex>)> {
    spec.validate()?;
    let mut owner: Vec<Option<BlockId>> = vec![None; l.n_vertices()];
    let mut embeddings = Vec::new();
    for b in spec.blocks() {
        let e = embed_block(block, b, spec.anchor(b), spec.variant(b), l)?;
        for &v in &e.vertices {
            let slot = &mut owner[l.vertex_index(v)];
            if let Some(other) = slot {
                return Err(FqError::InfeasibleLayout(format!(
                    "blocks {other:?} and {b:?} share vertex {v:?}"
                )));
            }
            *slot = Some(b);
        }
        embeddings.push(e);
    }
    let padding = (0..l.n_vertices())
        .filter(|&i| owner[i].is_none())
        .map(|i| l.vertex(i))
        .collect();
    Ok((embeddings, padding))
}

/// One occupation image per padding vertex.
pub fn padding_stabilizers(padding: &[Vertex], table: &MappingTable) -> Vec<PauliOperator> {
    padding
        .iter()
        .map(|&p| table.occupation(p).clone())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaquetteStabilizer {
    pub block: BlockId,
    /// Index into the block's plaquette list.
    pub plaquette: usize,
    pub flavor: Flavor,
    pub monomial: MajoranaMonomial,
    /// Image before weight reduction.
    pub raw: PauliOperator,
    pub op: PauliOperator,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HopDirection {
    /// `(x, y) -> (x, y + 1)`.
    Right,
    /// `(x, y) -> (x + 1, y)`.
    Up,
    /// `(x, y, z) -> (x, y, z + 1)`.
    Back,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LogicalKind {
    Occupation { block: BlockId },
    Hop { from: BlockId, to: BlockId, dir: HopDirection },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogicalOperator {
    pub kind: LogicalKind,
    /// Monomial over the `N_F` logical modes.
    pub logical: MajoranaMonomial,
    /// Monomial over lattice vertices.
    pub physical: MajoranaMonomial,
    /// Sides used for the `γ` and `γ̃` factors.
    pub sides: (usize, usize),
    pub op: PauliOperator,
}

impl LogicalOperator {
    pub fn label(&self) -> String {
        match self.kind {
            LogicalKind::Occupation { block: b } => format!("W({},{},{})", b.x, b.y, b.z),
            LogicalKind::Hop { from, to, dir } => format!(
                "T{:?}({},{},{})->({},{},{})",
                dir, from.x, from.y, from.z, to.x, to.y, to.z
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeParameters {
    pub d_fq: usize,
    pub d_ff: usize,
    pub n_f: usize,
    pub n_qubits: usize,
    /// Filled in by the verifier.
    pub d_fq_lower: Option<usize>,
    pub d_fq_upper: Option<usize>,
    pub rate: f64,
}

#[derive(Clone, Debug)]
pub struct ConcatenatedCode {
    pub spec: LayoutSpec,
    pub block: ColorCodeBlock,
    pub table: MappingTable,
    pub embeddings: Vec<Embedding>,
    pub padding: Vec<Vertex>,
    pub padding_stabilizers: Vec<PauliOperator>,
    pub plaquette_stabilizers: Vec<PlaquetteStabilizer>,
    pub logicals: Vec<LogicalOperator>,
    pub params: CodeParameters,
}

impl ConcatenatedCode {
    pub fn lattice(&self) -> &Lattice {
        self.table.lattice()
    }

    pub fn n_qubits(&self) -> usize {
        self.table.n_qubits()
    }

    pub fn n_f(&self) -> usize {
        self.embeddings.len()
    }

    pub fn vertex_stabilizers(&self) -> &[PauliOperator] {
        self.table.vertex_stabilizers()
    }

    /// Vertex stabilizers, then padding, then plaquette-type.
    pub fn stabilizers(&self) -> Vec<PauliOperator> {
        let mut out: Vec<PauliOperator> = self.vertex_stabilizers().to_vec();
        out.extend(self.padding_stabilizers.iter().cloned());
        out.extend(self.plaquette_stabilizers.iter().map(|p| p.op.clone()));
        out
    }

    pub fn block_index(&self, b: BlockId) -> Option<usize> {
        self.embeddings.iter().position(|e| e.block == b)
    }

    /// Lattice vertex indices of a block.
    pub fn block_vertex_indices(&self, block: usize) -> Vec<usize> {
        let l = self.lattice();
        self.embeddings[block]
            .vertices
            .iter()
            .map(|&v| l.vertex_index(v))
            .collect()
    }

    /// Physical monomial of a block-local monomial.
    pub fn lift(&self, block: usize, local: &MajoranaMonomial) -> MajoranaMonomial {
        let verts = self.block_vertex_indices(block);
        let n = self.lattice().n_vertices();
        MajoranaMonomial::from_factors(
            n,
            local.g_bits().iter_ones().map(|i| verts[i]),
            local.gt_bits().iter_ones().map(|i| verts[i]),
        )
    }

    pub fn occupation_logical(&self, block: usize) -> Option<&LogicalOperator> {
        let b = self.embeddings[block].block;
        self.logicals
            .iter()
            .find(|lg| lg.kind == LogicalKind::Occupation { block: b })
    }
}

/// Translation-covariant ordering key of an operator relative to `anchor`.
pub fn relative_key(l: &Lattice, op: &PauliOperator, anchor: Vertex) -> Vec<([i64; 3], usize, u8)> {
    let mut key: Vec<([i64; 3], usize, u8)> = op
        .support()
        .into_iter()
        .map(|q| {
            let e = l.edge(q);
            let d = l.displacement(anchor, e.base);
            let p = match op.get(q) {
                crate::pauli::Pauli::X => 1,
                crate::pauli::Pauli::Y => 2,
                crate::pauli::Pauli::Z => 3,
                crate::pauli::Pauli::I => 0,
            };
            ([d[2], d[1], d[0]], e.axis.index(), p)
        })
        .collect();
    key.sort();
    key
}

/// Lowest corner (z, then y, then x) of a vertex set, translation-covariant
/// for sets smaller than half the lattice.
pub fn geometric_anchor(l: &Lattice, verts: &[Vertex]) -> Vertex {
    let origin = verts[0];
    let (best, _) = verts
        .iter()
        .map(|&v| {
            let d = l.displacement(origin, v);
            (v, [d[2], d[1], d[0]])
        })
        .min_by_key(|&(_, k)| k)
        .expect("non-empty");
    best
}

fn in_layer_plane() -> Plane {
    (Axis::X, Axis::Y)
}

/// Vertex stabilizers used to reduce a local in-layer operator: the
/// in-layer ones at vertices of the bounding box of `verts` grown by one.
fn local_reducers(table: &MappingTable, verts: &[Vertex]) -> Vec<PauliOperator> {
    let l = table.lattice();
    let anchor = geometric_anchor(l, verts);
    let disp: Vec<[i64; 3]> = verts.iter().map(|&v| l.displacement(anchor, v)).collect();
    let lo = |a: usize| disp.iter().map(|d| d[a]).min().unwrap_or(0);
    let hi = |a: usize| disp.iter().map(|d| d[a]).max().unwrap_or(0);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for dy in lo(1) - 1..=hi(1) + 1 {
        for dx in lo(0) - 1..=hi(0) + 1 {
            let v = l.step(anchor, [dx, dy, 0]);
            if seen.insert(v) {
                if let Some(g) = table.vertex_stabilizer(v, in_layer_plane()) {
                    out.push(g.clone());
                }
            }
        }
    }
    out
}

/// Exact coset minimisation of a plaquette image over nearby in-layer
/// vertex stabilizers, with a translation-covariant tie-break.
pub fn reduce_plaquette(
    table: &MappingTable,
    raw: &PauliOperator,
    verts: &[Vertex],
) -> PauliOperator {
    let l = table.lattice();
    let anchor = geometric_anchor(l, verts);
    let gens = local_reducers(table, verts);
    let budget = SearchBudget {
        exhaustive_cutoff: 20,
        ..SearchBudget::default()
    };
    min_weight_in_coset_by(raw, &gens, budget, |a, b| {
        relative_key(l, a, anchor).cmp(&relative_key(l, b, anchor))
    })
}

/// Greedy weight descent over vertex stabilizers touching the operator.
/// With `layer = Some(k)`, only in-layer stabilizers of layer `k` are used.
pub fn reduce_extended(
    table: &MappingTable,
    op: &PauliOperator,
    layer: Option<usize>,
) -> PauliOperator {
    let pool: Vec<&PauliOperator> = table
        .vertex_stabilizers()
        .iter()
        .zip(table.stabilizer_labels())
        .filter(|(_, (v, plane))| match layer {
            Some(k) => v.z == k && *plane == in_layer_plane(),
            None => true,
        })
        .map(|(g, _)| g)
        .collect();
    let better = |a: &PauliOperator, b: &PauliOperator| match a.weight().cmp(&b.weight()) {
        Ordering::Less => true,
        Ordering::Equal => a.lex_cmp(b) == Ordering::Less,
        Ordering::Greater => false,
    };
    let mut cur = op.clone();
    loop {
        let support = cur.support_bits();
        let touching: Vec<&PauliOperator> = pool
            .iter()
            .copied()
            .filter(|g| g.support_bits().overlap(&support) > 0)
            .collect();
        let mut improved = false;
        for g in &touching {
            let cand = cur.mul(g);
            if cand.weight() < cur.weight() {
                cur = cand;
                improved = true;
            }
        }
        if !improved {
            // Pairs of stabilizers sharing support, to escape plateaus.
            'pairs: for (i, g) in touching.iter().enumerate() {
                for h in &touching[i + 1..] {
                    if g.support_bits().overlap(&h.support_bits()) == 0 {
                        continue;
                    }
                    let cand = cur.mul(g).mul(h);
                    if better(&cand, &cur) && cand.weight() < cur.weight() {
                        cur = cand;
                        improved = true;
                        break 'pairs;
                    }
                }
            }
        }
        if !improved {
            return cur;
        }
    }
}

/// Build the 2D code (or, for a 3D spec, the stacked 3D code).
pub fn assemble(spec: &LayoutSpec) -> Result<ConcatenatedCode> {
    spec.validate()?;
    let block = ColorCodeBlock::build(spec.d_ff)?;
    let lattice = spec.lattice()?;
    let table = MappingTable::for_lattice(lattice.clone())?;
    let (embeddings, padding) = layout_blocks(spec, &block, &lattice)?;
    let padding_stabilizers = padding_stabilizers(&padding, &table);

    let nv = lattice.n_vertices();
    let lift = |e: &Embedding, local: &MajoranaMonomial| -> MajoranaMonomial {
        MajoranaMonomial::from_factors(
            nv,
            local.g_bits().iter_ones().map(|i| lattice.vertex_index(e.vertices[i])),
            local.gt_bits().iter_ones().map(|i| lattice.vertex_index(e.vertices[i])),
        )
    };

    let jobs: Vec<(usize, usize, Flavor)> = (0..embeddings.len())
        .flat_map(|bi| {
            (0..block.plaquettes().len())
                .flat_map(move |pi| [(bi, pi, Flavor::Gamma), (bi, pi, Flavor::GammaTilde)])
        })
        .collect();
    let plaquette_stabilizers = jobs
        .par_iter()
        .map(|&(bi, pi, flavor)| -> Result<PlaquetteStabilizer> {
            let e = &embeddings[bi];
            let p = &block.plaquettes()[pi];
            let local = match flavor {
                Flavor::Gamma => MajoranaMonomial::from_factors(block.n_vertices(), p.vertices.iter().copied(), []),
                Flavor::GammaTilde => MajoranaMonomial::from_factors(block.n_vertices(), [], p.vertices.iter().copied()),
            };
            let monomial = lift(e, &local);
            let raw = table.majorana_to_pauli(&monomial)?;
            let verts: Vec<Vertex> = p.vertices.iter().map(|&i| e.vertices[i]).collect();
            let op = reduce_plaquette(&table, &raw, &verts);
            Ok(PlaquetteStabilizer {
                block: e.block,
                plaquette: pi,
                flavor,
                monomial,
                raw,
                op,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    // Logical operators.
    let n_f = embeddings.len();
    let index: BTreeMap<BlockId, usize> = embeddings
        .iter()
        .enumerate()
        .map(|(i, e)| (e.block, i))
        .collect();
    let mut logical_jobs: Vec<LogicalKind> = Vec::new();
    for e in &embeddings {
        logical_jobs.push(LogicalKind::Occupation { block: e.block });
    }
    for e in &embeddings {
        let b = e.block;
        let mut push = |to: BlockId, dir| {
            if index.contains_key(&to) {
                logical_jobs.push(LogicalKind::Hop { from: b, to, dir });
            }
        };
        if b.y + 1 < spec.n_by {
            push(BlockId::new(b.x, b.y + 1, b.z), HopDirection::Right);
        }
        if b.x + 1 < spec.n_bx {
            push(BlockId::new(b.x + 1, b.y, b.z), HopDirection::Up);
        }
        if spec.dim == 3 && b.z + 1 < spec.n_bz {
            push(BlockId::new(b.x, b.y, b.z + 1), HopDirection::Back);
        }
    }

    let logicals = logical_jobs
        .par_iter()
        .map(|&kind| -> Result<LogicalOperator> {
            let (from, to) = match kind {
                LogicalKind::Occupation { block } => (block, block),
                LogicalKind::Hop { from, to, .. } => (from, to),
            };
            let (ia, ib) = (index[&from], index[&to]);
            let logical = MajoranaMonomial::hopping(n_f, ia, ib);
            let layer = match kind {
                LogicalKind::Hop { dir: HopDirection::Back, .. } => None,
                _ => Some(from.z),
            };
            let mut best: Option<(PauliOperator, MajoranaMonomial, (usize, usize))> = None;
            let combos: Vec<(usize, usize)> = match kind {
                LogicalKind::Occupation { .. } => vec![(0, 0)],
                LogicalKind::Hop { .. } => (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).collect(),
            };
            for (si, sj) in combos {
                let physical = lift(&embeddings[ia], &block.side_logical(Flavor::Gamma, si))
                    .mul(&lift(&embeddings[ib], &block.side_logical(Flavor::GammaTilde, sj)));
                let raw = table.majorana_to_pauli(&physical)?;
                let op = reduce_extended(&table, &raw, layer);
                let take = match &best {
                    None => true,
                    Some((b, _, _)) => op.weight() < b.weight(),
                };
                if take {
                    best = Some((op, physical, (si, sj)));
                }
            }
            let (op, physical, sides) = best.expect("at least one side combination");
            Ok(LogicalOperator {
                kind,
                logical,
                physical,
                sides,
                op,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let n_qubits = lattice.n_edges();
    let params = CodeParameters {
        d_fq: spec.d_fq,
        d_ff: spec.d_ff,
        n_f,
        n_qubits,
        d_fq_lower: None,
        d_fq_upper: None,
        rate: n_f as f64 / n_qubits as f64,
    };
    let code = ConcatenatedCode {
        spec: spec.clone(),
        block,
        table,
        embeddings,
        padding,
        padding_stabilizers,
        plaquette_stabilizers,
        logicals,
        params,
    };
    check_invariants(&code)?;
    Ok(code)
}

/// Stacked 3D code; `spec` must be three-dimensional.
pub fn stack_3d(spec: &LayoutSpec) -> Result<ConcatenatedCode> {
    if spec.dim != 3 {
        return Err(FqError::InfeasibleLayout(
            "stack_3d needs a three-dimensional layout".into(),
        ));
    }
    assemble(spec)
}

/// Commutation checks that every assembled code must pass.
pub fn check_invariants(code: &ConcatenatedCode) -> Result<()> {
    let stabs = code.stabilizers();
    for (i, a) in stabs.iter().enumerate() {
        for (j, b) in stabs.iter().enumerate().skip(i + 1) {
            if !a.commutes_with(b) {
                return Err(FqError::InvariantViolation(format!(
                    "stabilizers {i} and {j} anticommute"
                )));
            }
        }
    }
    for lg in &code.logicals {
        if let Some(i) = stabs.iter().position(|s| !s.commutes_with(&lg.op)) {
            return Err(FqError::InvariantViolation(format!(
                "logical {} anticommutes with stabilizer {i}",
                lg.label()
            )));
        }
    }
    for (i, a) in code.logicals.iter().enumerate() {
        for b in &code.logicals[i + 1..] {
            if a.op.commutes_with(&b.op) == a.logical.anticommutes_with(&b.logical) {
                return Err(FqError::InvariantViolation(format!(
                    "logicals {} and {} break the fermionic algebra",
                    a.label(),
                    b.label()
                )));
            }
        }
    }
    Ok(())
}

/// Serializable snapshot of an assembled code.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeBundle {
    pub spec: LayoutSpec,
    pub params: CodeParameters,
    pub lattice_sizes: Vec<usize>,
    /// Stabilizer check matrix in the text format.
    pub check_matrix: String,
    pub logicals: Vec<(String, String)>,
    pub layout: Vec<(BlockId, Variant, Vertex)>,
    pub padding: Vec<Vertex>,
}

impl CodeBundle {
    pub fn from_code(code: &ConcatenatedCode) -> Self {
        Self {
            spec: code.spec.clone(),
            params: code.params.clone(),
            lattice_sizes: code.lattice().sizes()[..code.lattice().dim()].to_vec(),
            check_matrix: write_check_matrix(code.n_qubits(), &code.stabilizers()),
            logicals: code
                .logicals
                .iter()
                .map(|l| (l.label(), l.op.to_text_line()))
                .collect(),
            layout: code
                .embeddings
                .iter()
                .map(|e| (e.block, e.variant, e.anchor))
                .collect(),
            padding: code.padding.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("bundle serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| FqError::Parse {
            line: e.line(),
            msg: e.to_string(),
        })
    }

    pub fn stabilizers(&self) -> Result<Vec<PauliOperator>> {
        Ok(read_check_matrix(&self.check_matrix)?.1)
    }

    pub fn logical_ops(&self) -> Result<Vec<(String, PauliOperator)>> {
        let n = self.params.n_qubits;
        self.logicals
            .iter()
            .enumerate()
            .map(|(i, (label, line))| {
                Ok((label.clone(), PauliOperator::parse_text_line(n, line, i + 1)?))
            })
            .collect()
    }
}

/// Support bits of all edges incident to the given vertices.
pub fn edges_near(l: &Lattice, verts: &[Vertex]) -> Bits {
    let mut b = Bits::zeros(l.n_edges());
    for &v in verts {
        for e in l.incident_edges(v).unwrap_or_default() {
            b.set(l.edge_index(e), true);
        }
    }
    b
}

/// Edge between two adjacent vertices, if any.
pub fn edge_between(l: &Lattice, u: Vertex, w: Vertex) -> Option<Edge> {
    for &a in l.axes() {
        if l.step(u, a.unit()) == w {
            return Some(Edge::new(a, u));
        }
        if l.step(w, a.unit()) == u {
            return Some(Edge::new(a, w));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn padding_counts() {
        for (d, bx, by, expect) in [(5, 2, 2, 4), (3, 1, 2, 1), (9, 2, 2, 8), (5, 1, 2, 2)] {
            let spec = LayoutSpec::new_2d(d, bx, by);
            let block = ColorCodeBlock::build(d).unwrap();
            let l = spec.lattice().unwrap();
            let (emb, pad) = layout_blocks(&spec, &block, &l).unwrap();
            assert_eq!(emb.len(), bx * by);
            assert_eq!(pad.len(), expect, "d={d} {bx}x{by}");
        }
    }

    #[test]
    fn rejects_odd_column_count() {
        assert!(LayoutSpec::new_2d(5, 2, 3).validate().is_err());
        assert!(LayoutSpec::new_2d(4, 2, 2).validate().is_err());
    }

    #[test]
    fn small_code_assembles() {
        let code = assemble(&LayoutSpec::new_2d(3, 1, 2)).unwrap();
        assert_eq!(code.n_f(), 2);
        assert_eq!(code.n_qubits(), 30);
        assert_eq!(code.plaquette_stabilizers.len(), 12);
    }
}
