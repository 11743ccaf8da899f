//! End-to-end acceptance run. One line per criterion:
//! `cargo test --release -p fqcodes --test acceptance -- --nocapture`

use std::time::Instant;

use fqcodes::assembler::{HopDirection, LogicalKind};
use fqcodes::decoder::{run_montecarlo, wilson_interval, crossing_estimate, ConcatenatedDecoder, DecoderStats, NoiseKind, NoiseModel};
use fqcodes::fqmap::{validate_homomorphism, AlgebraImage, MappingTable, PLANES_3D};
use fqcodes::verifier::{
    check_projection, estimate_distance, footprint_census, logical_accounting, sector_generators, DistanceBudget,
};
use fqcodes::{assemble, Axis, BlockId, Lattice, LayoutSpec, MajoranaMonomial, Pauli, PauliOperator, RowReducer, Vertex};

type Outcome = Result<String, String>;

/// Exact distance of two d=3 blocks on the smallest torus.
const DISTANCE_FIXTURE_D3: usize = 3;
const TRIALS: u64 = 100_000;
const P_GRID: [f64; 6] = [0.001, 0.002, 0.003, 0.005, 0.01, 0.02];
const SEED: u64 = 2024;

fn check(cond: bool, msg: String) -> Outcome {
    if cond {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn homomorphism() -> Outcome {
    let start = Instant::now();
    let r2 = validate_homomorphism(&MappingTable::new_2d(Lattice::new_2d(8, 8)).map_err(|e| e.to_string())?);
    let r3 = validate_homomorphism(&MappingTable::new_3d(Lattice::new_3d(4, 4, 4)).map_err(|e| e.to_string())?);
    let secs = start.elapsed().as_secs_f64();
    check(
        r2.passed() && r3.passed() && secs < 60.0,
        format!(
            "8x8: {} pairs, {} mismatches; 4x4x4: {} pairs, {} mismatches; {secs:.1}s",
            r2.pairs_checked,
            r2.mismatches.len(),
            r3.pairs_checked,
            r3.mismatches.len()
        ),
    )
}

fn loop_product(t: &MappingTable, d: Vertex, (r, u): (Axis, Axis)) -> PauliOperator {
    let l = t.lattice();
    let a = l.step(d, u.unit().map(|c| -c));
    let b = l.step(a, r.unit());
    t.hop(d, r).mul(t.hop(b, u)).mul(t.hop(a, u)).mul(t.hop(a, r)).mul(t.occupation(b)).mul(t.occupation(d))
}

fn vertex_identity() -> Outcome {
    let t = MappingTable::new_2d(Lattice::new_2d(8, 8)).map_err(|e| e.to_string())?;
    let images: Vec<&PauliOperator> = t.generators().into_iter().map(|g| t.image(g)).collect();
    let mut bad = 0;
    for d in t.lattice().vertices() {
        let g = t.vertex_stabilizer(d, (Axis::X, Axis::Y)).ok_or("missing stabilizer")?;
        if &loop_product(&t, d, (Axis::X, Axis::Y)) != g
            || g.weight() != 6
            || images.iter().any(|i| !i.commutes_with(g))
        {
            bad += 1;
        }
    }
    let t3 = MappingTable::new_3d(Lattice::new_3d(4, 4, 4)).map_err(|e| e.to_string())?;
    for d in t3.lattice().vertices() {
        for plane in PLANES_3D {
            if Some(&loop_product(&t3, d, plane)) != t3.vertex_stabilizer(d, plane) {
                bad += 1;
            }
        }
    }
    check(bad == 0, format!("{bad} vertices where the loop product differs from G or G fails weight 6 / commutation"))
}

fn hexagon() -> Outcome {
    let t = MappingTable::new_2d(Lattice::new_2d(6, 6)).map_err(|e| e.to_string())?;
    let l = t.lattice();
    let v = [(1, 3), (2, 3), (3, 3), (3, 2), (2, 2), (1, 2)].map(|(x, y)| Vertex::xy(x, y));
    let product = t
        .occupation(v[0])
        .mul(t.hop(v[0], Axis::X))
        .mul(t.occupation(v[3]))
        .mul(t.hop(v[3], Axis::Y))
        .mul(t.occupation(v[5]))
        .mul(t.hop(v[5], Axis::X));
    let target = MajoranaMonomial::from_factors(l.n_vertices(), [], v.map(|p| l.vertex_index(p)));
    let decomposes = t.pauli_to_majorana(&product).ok() == Some(AlgebraImage::Monomial(target));
    let reduced = t.vertex_stabilizers().iter().map(|g| product.mul(g).weight()).min().unwrap_or(0);
    check(
        decomposes && product.weight() == 11 && reduced == 9,
        format!("decomposes={decomposes}, weight {} -> {reduced}", product.weight()),
    )
}

fn weight_formulas() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for d in [3, 5, 7] {
        let code = assemble(&LayoutSpec::new_2d(d, 2, 2)).map_err(|e| e.to_string())?;
        let w: Vec<usize> = (0..code.n_f()).filter_map(|b| code.occupation_logical(b)).map(|l| l.op.weight()).collect();
        let hops: Vec<(HopDirection, usize)> = code
            .logicals
            .iter()
            .filter_map(|l| match l.kind {
                LogicalKind::Hop { dir, .. } => Some((dir, l.op.weight())),
                _ => None,
            })
            .collect();
        let t_min = hops.iter().map(|h| h.1).min().unwrap_or(0);
        let both = [HopDirection::Right, HopDirection::Up].iter().all(|d| hops.iter().any(|h| h.0 == *d));
        ok &= w.iter().all(|&x| x == 2 * d + 2) && 2 * t_min >= 5 * d - 1 && both;
        parts.push(format!("d={d}: |W^L|={:?} min|T^L|={t_min}", w.first().unwrap_or(&0)));
    }
    check(ok, parts.join("; "))
}

fn census() -> Outcome {
    let c2 = footprint_census(&assemble(&LayoutSpec::new_2d(5, 2, 2)).map_err(|e| e.to_string())?);
    let c3 = footprint_census(&assemble(&LayoutSpec::new_3d(5, 1, 2, 2)).map_err(|e| e.to_string())?);
    check(
        c2.classes.len() == 6 && c3.classes.len() == 6,
        format!("2D {} classes, 3D {} classes", c2.classes.len(), c3.classes.len()),
    )
}

fn padding() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for d in [5, 9] {
        for (nbx, nby) in [(1, 2), (2, 2)] {
            let code = assemble(&LayoutSpec::new_2d(d, nbx, nby)).map_err(|e| e.to_string())?;
            let per = code.padding.len() as f64 / code.n_f() as f64;
            ok &= code.padding.len() == (d - 1) / 4 * code.n_f();
            parts.push(format!("d={d} {nbx}x{nby}: {per} per block"));
        }
    }
    check(ok, parts.join("; "))
}

fn distance() -> Outcome {
    let budget = DistanceBudget::default();
    let d3 = estimate_distance(&assemble(&LayoutSpec::new_2d(3, 1, 2)).map_err(|e| e.to_string())?, &budget)
        .map_err(|e| e.to_string())?;
    let d5 = estimate_distance(&assemble(&LayoutSpec::new_2d(5, 1, 2)).map_err(|e| e.to_string())?, &budget)
        .map_err(|e| e.to_string())?;
    check(
        d3.exact && d3.lower == DISTANCE_FIXTURE_D3 && d5.lower > d3.upper,
        format!(
            "d_Ff=3: {} (exact={}); d_Ff=5: [{}, {}]",
            d3.lower, d3.exact, d5.lower, d5.upper
        ),
    )
}

fn sectors() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (spec, want) in [(LayoutSpec::new_2d(3, 1, 2), 2), (LayoutSpec::new_3d(3, 1, 2, 2), 3)] {
        let code = assemble(&spec).map_err(|e| e.to_string())?;
        let stabs = code.stabilizers();
        let n = code.n_qubits();
        let span = RowReducer::new(2 * n, stabs.iter().map(|s| s.to_symplectic()));
        let ops = sector_generators(&code).map_err(|e| e.to_string())?;
        ok &= ops.len() == want;
        for s in &ops {
            let commutes = stabs.iter().all(|g| g.commutes_with(&s.op));
            let outside = !span.contains(&s.op.to_symplectic());
            let long = s.op.weight() >= code.lattice().size(s.axis);
            ok &= commutes && outside && long && (0..n).all(|q| matches!(s.op.get(q), Pauli::I | Pauli::Z));
            parts.push(format!("{} w={}", s.label(), s.op.weight()));
        }
    }
    check(ok, parts.join(", "))
}

fn projection() -> Outcome {
    let c3 = assemble(&LayoutSpec::new_3d(3, 1, 2, 2)).map_err(|e| e.to_string())?;
    let c2 = assemble(&LayoutSpec::new_2d(3, 1, 2)).map_err(|e| e.to_string())?;
    let report = check_projection(&c3, &c2).map_err(|e| e.to_string())?;
    let failed: Vec<String> = report.failures().map(|c| c.name.clone()).collect();
    check(report.passed(), format!("{} checks, failed {failed:?}", report.checks.len()))
}

struct Sweep {
    d: usize,
    stats: Vec<DecoderStats>,
}

fn sweep(d: usize) -> Result<Sweep, String> {
    let code = assemble(&LayoutSpec::new_2d(d, 1, 2)).map_err(|e| e.to_string())?;
    let mut stats = Vec::new();
    for p in P_GRID {
        let dec = ConcatenatedDecoder::new(&code, ConcatenatedDecoder::majorana_rate(&code, p)).map_err(|e| e.to_string())?;
        let model = NoiseModel::new(NoiseKind::IidXz, p).map_err(|e| e.to_string())?;
        stats.push(run_montecarlo(&dec, &model, TRIALS, SEED, &|_| {}));
    }
    Ok(Sweep { d, stats })
}

fn soundness(sweeps: &[Sweep], sweep_secs: f64) -> Outcome {
    let start = Instant::now();
    let mut aborts = 0;
    let mut parts = Vec::new();
    for s in sweeps {
        for st in s.stats.iter().filter(|st| [0.001, 0.005, 0.02].contains(&st.p)) {
            aborts += st.aborts;
            parts.push(format!("d={} p={}: {} aborts", s.d, st.p, st.aborts));
        }
    }
    let code = assemble(&LayoutSpec::new_3d(3, 1, 2, 2)).map_err(|e| e.to_string())?;
    let dec = ConcatenatedDecoder::new(&code, ConcatenatedDecoder::majorana_rate(&code, 0.001)).map_err(|e| e.to_string())?;
    let n = code.n_qubits();
    let mut wrong = 0;
    for q in 0..n {
        for p in [Pauli::X, Pauli::Y, Pauli::Z] {
            match dec.decode_trial(&PauliOperator::single(n, q, p)) {
                Ok(r) if r.blocks.is_success() && r.physical.is_success() => {}
                _ => wrong += 1,
            }
        }
    }
    let secs = sweep_secs + start.elapsed().as_secs_f64();
    check(
        aborts == 0 && wrong == 0 && secs < 600.0,
        format!("{}; 3D single-qubit: {wrong}/{} miscorrected; {secs:.0}s", parts.join(", "), 3 * n),
    )
}

/// Standard error of `1 - P_L` minus its prediction from `P_b`.
fn identity_sigma(s: &DecoderStats) -> f64 {
    let n = s.trials as f64;
    let k = 2.0 * s.n_f as f64;
    let pl = s.p_l(false);
    let pb = s.p_b();
    let var_l = pl * (1.0 - pl) / n;
    let slope = k * (1.0 - pb).powf(k - 1.0);
    let var_b = pb * (1.0 - pb) / s.p_b_samples() as f64;
    (var_l + slope * slope * var_b).sqrt()
}

fn suppression(small: &Sweep, large: &Sweep) -> Outcome {
    let pick = small
        .stats
        .iter()
        .zip(&large.stats)
        .find(|(a, b)| a.p_b_events() >= 30 && b.p_b_events() >= 30);
    let Some((a, b)) = pick else {
        return Err("no grid point with 30 events on both codes".into());
    };
    let ci = |s: &DecoderStats| wilson_interval(s.p_b_events(), s.p_b_samples(), 1.96);
    let (ia, ib) = (ci(a), ci(b));
    let separated = b.p_b() < a.p_b() && ib.1 < ia.0;
    let mut ok = separated;
    let mut parts = vec![format!(
        "p={}: P_b(3)={:.2e} [{:.2e},{:.2e}] P_b(5)={:.2e} [{:.2e},{:.2e}]",
        a.p, a.p_b(), ia.0, ia.1, b.p_b(), ib.0, ib.1
    )];
    for s in [a, b] {
        let measured = 1.0 - s.p_l(false);
        let predicted = s.predicted_success();
        let z = (measured - predicted).abs() / identity_sigma(s);
        ok &= z <= 3.0;
        parts.push(format!("d={}: 1-P_L={measured:.5} vs {predicted:.5} ({z:.1} sigma)", s.d_ff));
    }
    match crossing_estimate(&small.stats, &large.stats) {
        Some(x) => parts.push(format!("crossing ~{x:.3}")),
        None => parts.push("no crossing on grid".into()),
    }
    check(ok, parts.join("; "))
}

fn accounting() -> Outcome {
    let full = LayoutSpec::new_2d(5, 2, 2);
    let mut specs = vec![full.clone()];
    specs.push(full.clone().without(BlockId::new(1, 1, 0)));
    specs.push(full.clone().without(BlockId::new(1, 1, 0)).without(BlockId::new(0, 0, 0)));
    let mut sizes = Vec::new();
    let mut sectors = Vec::new();
    let mut ok = true;
    for spec in specs {
        let code = assemble(&spec).map_err(|e| e.to_string())?;
        let acc = logical_accounting(&code);
        ok &= acc.n_qubits as i64 - acc.rank as i64 == acc.n_f as i64 + acc.n_sector;
        sizes.push(acc.n_qubits);
        sectors.push((acc.n_f, acc.n_sector));
    }
    ok &= sizes.windows(2).all(|w| w[0] == w[1]) && sectors.windows(2).all(|w| w[0].1 == w[1].1);
    check(ok, format!("n={} (N_F, n_sector) = {sectors:?}", sizes[0]))
}

#[test]
fn acceptance() {
    let start = Instant::now();
    let sweeps = [sweep(3), sweep(5)];
    let sweep_secs = start.elapsed().as_secs_f64();
    let sweeps: Vec<Sweep> = match sweeps.into_iter().collect::<Result<_, _>>() {
        Ok(s) => s,
        Err(e) => panic!("sweep failed: {e}"),
    };
    for s in &sweeps {
        for st in &s.stats {
            println!(
                "  d={} p={:<6} P_b={:.3e} events={:<5} P_L={:.3e} pred={:.3e} aborts={}",
                s.d,
                st.p,
                st.p_b(),
                st.p_b_events(),
                st.p_l(false),
                1.0 - st.predicted_success(),
                st.aborts
            );
        }
    }
    let results: Vec<(&str, Outcome)> = vec![
        ("homomorphism sweep", homomorphism()),
        ("vertex stabilizer identity", vertex_identity()),
        ("hexagon plaquette", hexagon()),
        ("weight formulas", weight_formulas()),
        ("footprint census", census()),
        ("padding count", padding()),
        ("distance monotonicity", distance()),
        ("sector operators", sectors()),
        ("projection", projection()),
        ("decoder soundness", soundness(&sweeps, sweep_secs)),
        ("suppression", suppression(&sweeps[0], &sweeps[1])),
        ("logical accounting", accounting()),
    ];
    let mut failed = Vec::new();
    for (i, (name, r)) in results.iter().enumerate() {
        let (tag, msg) = match r {
            Ok(m) => ("PASS", m),
            Err(m) => ("FAIL", m),
        };
        println!("criterion {:>2} [{tag}] {name}: {msg}", i + 1);
        if r.is_err() {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
