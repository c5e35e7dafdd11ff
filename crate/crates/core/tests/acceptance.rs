//! The ten acceptance criteria, one PASS/FAIL line each. Runs without the
//! libtest harness so the lines are always printed.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sg_core::catastrophe::{
    cusp_stationary_points, locate_folds, simulate_sde, stationary_density, AxisRange, CuspControl, Diffusion,
    SdeConfig, Stability, Support, BOUNDARY_BAND,
};
use sg_core::game::{chicken, has_potential_condition, nash_to_uv, prisoners_dilemma, uv_to_nash};
use sg_core::lemke_howson::rational::{parse_rational, rational_from_f64};
use sg_core::lemke_howson::{
    degeneracy_witness, enumerate_equilibria_lh, lemke_howson, support_enumeration, BimatrixEquilibrium, Rational,
    RationalBimatrix,
};
use sg_core::qre::{
    branch_locus, count_fixed_points_region, jacobian_terms, logit_response, nash_limit_check, sample_crossings,
    solve_qre_fixed_points, trace_critical_set, validate_region_boundary, LogitGame2x2, LogitParams, QCoordinates,
};
use sg_core::{BimatrixGame, Matrix};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q(s: &str) -> Rational {
    parse_rational(s).unwrap()
}

fn random_int_game(rng: &mut ChaCha8Rng, l: usize, m: usize, lo: i32, hi: i32) -> BimatrixGame {
    let mut draw = || (0..l).map(|_| (0..m).map(|_| f64::from(rng.random_range(lo..=hi))).collect()).collect();
    let a: Vec<Vec<f64>> = draw();
    let b: Vec<Vec<f64>> = draw();
    BimatrixGame::from_rows(&a, &b).unwrap()
}

fn criterion_1() -> Outcome {
    let g = prisoners_dilemma();
    let support = support_enumeration(&g).map_err(|e| e.to_string())?;
    let lh = enumerate_equilibria_lh(&g.positivize()).map_err(|e| e.to_string())?;
    let defect = (vec![q("0"), q("1")], vec![q("0"), q("1")]);
    for (name, set) in [("support", &support), ("lh", &lh.equilibria)] {
        ensure(set.len() == 1, || format!("{name}: {} equilibria", set.len()))?;
        ensure((set[0].x.clone(), set[0].y.clone()) == defect, || {
            format!("{name}: equilibrium is not (defect, defect)")
        })?;
    }
    Ok("one equilibrium, (defect, defect), by both methods".into())
}

/// Indifference solve for a fully mixed 2×2 equilibrium, in exact arithmetic.
fn indifference_mix(g: &BimatrixGame) -> (Rational, Rational) {
    let a = |i, j| rational_from_f64(g.a().get(i, j)).unwrap();
    let b = |i, j| rational_from_f64(g.b().get(i, j)).unwrap();
    // y₁ makes the row agent indifferent, x₁ the column agent
    let y1 = (a(1, 1) - a(0, 1)) / (a(0, 0) - a(0, 1) - a(1, 0) + a(1, 1));
    let x1 = (b(1, 1) - b(1, 0)) / (b(0, 0) - b(1, 0) - b(0, 1) + b(1, 1));
    (x1, y1)
}

fn criterion_2() -> Outcome {
    let g = chicken();
    let (x1, y1) = indifference_mix(&g);
    ensure(x1 == q("9/10") && y1 == q("9/10"), || format!("oracle mix {x1}, {y1}"))?;
    let mixed = (vec![x1.clone(), q("1") - &x1], vec![y1.clone(), q("1") - &y1]);
    let expected = [
        (vec![q("1"), q("0")], vec![q("0"), q("1")]),
        (vec![q("0"), q("1")], vec![q("1"), q("0")]),
        mixed,
    ];
    let support = support_enumeration(&g).map_err(|e| e.to_string())?;
    let lh = enumerate_equilibria_lh(&g.positivize()).map_err(|e| e.to_string())?;
    for (name, set) in [("support", &support), ("lh", &lh.equilibria)] {
        ensure(set.len() == 3, || format!("{name}: {} equilibria", set.len()))?;
        for (x, y) in &expected {
            ensure(set.iter().any(|e| &e.x == x && &e.y == y), || {
                format!("{name}: missing ({x:?}, {y:?})")
            })?;
        }
    }
    Ok("three equilibria: two pure off-diagonal, mixed swerve 9/10 each".into())
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut games = 0;
    let mut skipped = 0;
    let mut endpoints = 0;
    while games < 100 {
        let (l, m) = (rng.random_range(2..=5), rng.random_range(2..=5));
        let g = random_int_game(&mut rng, l, m, 1, 9);
        let exact = RationalBimatrix::from_game(&g).map_err(|e| e.to_string())?;
        if degeneracy_witness(&exact).map_err(|e| e.to_string())?.is_some() {
            skipped += 1;
            continue;
        }
        games += 1;
        let all = support_enumeration(&g).map_err(|e| e.to_string())?;
        ensure(all.len() % 2 == 1, || format!("{l}x{m} game with {} equilibria: {g:?}", all.len()))?;
        for k in 1..=l + m {
            let out = lemke_howson(&g, k).map_err(|e| e.to_string())?;
            ensure(all.iter().any(|e: &BimatrixEquilibrium| e.same_strategies(&out.equilibrium)), || {
                format!("label {k} endpoint outside the oracle set: {g:?}")
            })?;
            endpoints += 1;
        }
    }
    Ok(format!(
        "100/100 odd, {endpoints} endpoints in the oracle set ({skipped} degenerate draws skipped)"
    ))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (l, m) = (rng.random_range(2..=4), rng.random_range(2..=4));
        let mut draw = || -> Vec<Vec<f64>> {
            (0..l)
                .map(|_| (0..m).map(|_| (rng.random_range(0.1..10.0f64) * 1e3).round() / 1e3).collect())
                .collect()
        };
        let (a, b) = (draw(), draw());
        let g = BimatrixGame::from_rows(&a, &b).unwrap();
        for eq in support_enumeration(&g).map_err(|e| e.to_string())? {
            let (u, v) = nash_to_uv(&g, &eq.point).map_err(|e| e.to_string())?;
            let back = uv_to_nash(&g, &u, &v).map_err(|e| e.to_string())?;
            let (u2, v2) = nash_to_uv(&g, &back).map_err(|e| e.to_string())?;
            let d = back.profile.max_distance(&eq.point.profile);
            let duv = u.iter().zip(&u2).chain(v.iter().zip(&v2)).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            worst = worst.max(d).max(duv);
            checked += 1;
        }
    }
    ensure(worst <= 1e-12, || format!("round-trip error {worst:e}"))?;
    Ok(format!("{checked} equilibria, worst round-trip error {worst:.1e}"))
}

/// Real roots of `−x³ + u₁x + u₂` counted by sign changes on a fine scan.
fn sign_change_roots(u1: f64, u2: f64) -> usize {
    let f = |x: f64| -x * x * x + u1 * x + u2;
    let n = 4_000;
    let (lo, hi) = (-3.0, 3.0);
    let mut count = 0;
    let mut prev = f(lo);
    for i in 1..=n {
        let cur = f(lo + (hi - lo) * i as f64 / n as f64);
        if prev == 0.0 || prev.signum() != cur.signum() {
            count += 1;
        }
        prev = cur;
    }
    count
}

fn criterion_5() -> Outcome {
    let axis = AxisRange::new(-2.0, 2.0, 200);
    let mut band = 0;
    let mut scan_checked = 0;
    for u1 in axis.values() {
        for u2 in axis.values() {
            let c = CuspControl::new(u1, u2);
            let n = cusp_stationary_points(c).roots.len();
            let d = c.discriminant();
            if d.abs() <= BOUNDARY_BAND {
                band += 1;
                continue;
            }
            let expected = if d > 0.0 { 3 } else { 1 };
            ensure(n == expected, || format!("({u1}, {u2}): {n} roots, Δ = {d:e}"))?;
            // |Δ| is the product of squared root gaps, so this keeps gaps above the scan pitch
            if d.abs() > 1e-2 {
                let scan = sign_change_roots(u1, u2);
                ensure(scan == n, || format!("({u1}, {u2}): scan finds {scan}, solver {n}"))?;
                scan_checked += 1;
            }
        }
    }
    for u1 in axis.values() {
        let n = cusp_stationary_points(CuspControl::new(u1, 0.0)).roots.len();
        let expected = if u1 < 0.0 { 1 } else { 3 };
        ensure(n == expected, || format!("pitchfork slice u1 = {u1}: {n} roots"))?;
    }
    let folds = locate_folds(1.0, AxisRange::new(-1.0, 1.0, 401));
    let exact = 2.0 / (3.0 * 3f64.sqrt());
    ensure(folds.len() == 2, || format!("{} folds at u1 = 1", folds.len()))?;
    let err = (folds[0] + exact).abs().max((folds[1] - exact).abs());
    ensure(err <= 1e-9, || format!("fold error {err:e}"))?;
    Ok(format!(
        "40000 nodes consistent ({band} in the boundary band, {scan_checked} cross-checked by sign scan), pitchfork ok, fold error {err:.1e}"
    ))
}

fn criterion_6() -> Outcome {
    let ou = |x: f64| -x;
    let sqrt2 = 2f64.sqrt();
    let drifts: Vec<(&str, Box<dyn Fn(f64) -> f64>, Diffusion, (f64, f64))> = vec![
        ("ou", Box::new(ou), Diffusion::Constant(sqrt2), (-8.0, 8.0)),
        ("cusp(1,0)", Box::new(|x: f64| CuspControl::new(1.0, 0.0).drift(x)), Diffusion::Constant(0.7), (-3.0, 3.0)),
        ("cusp(-1,0.5)", Box::new(|x: f64| CuspControl::new(-1.0, 0.5).drift(x)), Diffusion::Constant(1.0), (-3.0, 3.0)),
        ("cusp(2,0.3)", Box::new(|x: f64| CuspControl::new(2.0, 0.3).drift(x)), Diffusion::Constant(0.4), (-3.0, 3.0)),
        (
            "cusp(1,0) varying σ",
            Box::new(|x: f64| CuspControl::new(1.0, 0.0).drift(x)),
            Diffusion::Variable(std::sync::Arc::new(|x: f64| 0.5 + 0.2 * x * x / (1.0 + x * x))),
            (-3.0, 3.0),
        ),
    ];
    let mut worst_norm: f64 = 0.0;
    for (name, drift, sigma, (lo, hi)) in &drifts {
        let p = stationary_density(drift.as_ref(), sigma, Support::new(*lo, *hi).unwrap(), 4001)
            .map_err(|e| format!("{name}: {e}"))?;
        // composite Simpson over the grid, independent of the trapezoid used to normalize
        let h = p.spacing();
        let n = p.grid.len() - 1;
        let simpson: f64 = (0..=n)
            .map(|k| {
                let w = if k == 0 || k == n { 1.0 } else if k % 2 == 1 { 4.0 } else { 2.0 };
                w * p.grid[k].1
            })
            .sum::<f64>()
            * h
            / 3.0;
        worst_norm = worst_norm.max((p.integral() - 1.0).abs()).max((simpson - 1.0).abs());
    }
    ensure(worst_norm <= 1e-6, || format!("normalization error {worst_norm:e}"))?;

    let p = stationary_density(&ou, &Diffusion::Constant(sqrt2), Support::new(-8.0, 8.0).unwrap(), 4001)
        .map_err(|e| e.to_string())?;
    let normal = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let ou_err = p.grid.iter().map(|&(x, v)| (v - normal(x)).abs()).fold(0.0, f64::max);
    ensure(ou_err < 1e-3, || format!("OU pointwise error {ou_err:e}"))?;

    let cusp = CuspControl::new(1.0, 0.0);
    let bimodal = stationary_density(&|x| cusp.drift(x), &Diffusion::Constant(0.7), Support::new(-3.0, 3.0).unwrap(), 6001)
        .map_err(|e| e.to_string())?;
    let modes = bimodal.modes();
    ensure(modes.len() == 2, || format!("cusp modes {modes:?}"))?;
    ensure(
        (modes[0] + 1.0).abs() <= bimodal.spacing() && (modes[1] - 1.0).abs() <= bimodal.spacing(),
        || format!("cusp modes {modes:?}"),
    )?;
    let stable: Vec<f64> = cusp_stationary_points(cusp)
        .roots
        .iter()
        .filter(|r| r.stability == Stability::Stable)
        .map(|r| r.x)
        .collect();
    ensure(stable.len() == 2, || format!("stable roots {stable:?}"))?;

    let run = simulate_sde(&ou, &Diffusion::Constant(sqrt2), SdeConfig::new(0.0, 1e-3, 1_000_000, 42))
        .map_err(|e| e.to_string())?;
    let l1 = run.histogram(40, None).l1_distance(&p);
    ensure(l1 < 0.05, || format!("seed 42 histogram L1 = {l1:.4}"))?;
    Ok(format!(
        "normalization {worst_norm:.1e}, OU error {ou_err:.1e}, modes {:.4} and {:.4}, seed 42 L1 = {l1:.4}",
        modes[0], modes[1]
    ))
}

fn chicken2() -> LogitGame2x2 {
    LogitGame2x2::new(&chicken()).unwrap()
}

fn criterion_7() -> Outcome {
    let g = chicken2();
    let low = solve_qre_fixed_points(&g, &LogitParams::pair(0.01, 0.01).unwrap()).map_err(|e| e.to_string())?;
    ensure(low.len() == 1, || format!("{} fixed points at β = 0.01", low.len()))?;
    let mid = solve_qre_fixed_points(&g, &LogitParams::pair(10.0, 10.0).unwrap()).map_err(|e| e.to_string())?;
    ensure(mid.len() == 3, || format!("{} fixed points at β = 10", mid.len()))?;

    let report = nash_limit_check(&g, 50.0).map_err(|e| e.to_string())?;
    ensure(report.fixed_points.len() == 3, || format!("{} fixed points at β = 50", report.fixed_points.len()))?;
    // match against the exact oracle set independently of the report
    let nash = support_enumeration(&chicken()).map_err(|e| e.to_string())?;
    ensure(nash.len() == 3, || "oracle set size".into())?;
    let mut used = [false; 3];
    let mut worst: f64 = 0.0;
    for n in &nash {
        let (k, d) = report
            .fixed_points
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, f)| (k, f.profile.max_distance(&n.point.profile)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .ok_or("ran out of fixed points")?;
        used[k] = true;
        worst = worst.max(d);
    }
    ensure(worst <= 1e-2, || format!("Nash distance {worst:e}"))?;
    ensure(report.cardinality_match && report.max_distance <= 1e-2, || "report disagrees".into())?;
    Ok(format!("1 / 3 / 3 fixed points, β = 50 within {worst:.1e} of Nash"))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut games = vec![chicken2()];
    for _ in 0..10 {
        let mut v = || rng.random_range(-5.0..5.0f64);
        let g = BimatrixGame::from_rows(&[vec![v(), v()], vec![v(), v()]], &[vec![v(), v()], vec![v(), v()]]).unwrap();
        games.push(LogitGame2x2::new(&g).unwrap());
    }
    let h = 1e-5;
    let rel = |fd: f64, cf: f64| (fd - cf).abs() / cf.abs().max(1e-3);
    let mut worst: f64 = 0.0;
    for g in &games {
        for _ in 0..100 {
            let q = QCoordinates::new(rng.random_range(-0.98..0.98), rng.random_range(-0.98..0.98));
            let b = [rng.random_range(0.0..10.0), rng.random_range(0.0..10.0)];
            let t = jacobian_terms(g, q, &LogitParams::pair(b[0], b[1]).unwrap());
            for i in 0..2 {
                let o = q.get(1 - i);
                let fd1 = (g.response_q(i, b[i], o + h) - g.response_q(i, b[i], o - h)) / (2.0 * h);
                let fd2 = (g.response_q(i, b[i] + h, o) - g.response_q(i, b[i] - h, o)) / (2.0 * h);
                worst = worst.max(rel(fd1, t.f1[i])).max(rel(fd2, t.f2[i]));
            }
        }
    }
    ensure(worst < 1e-5, || format!("worst relative error {worst:e}"))?;
    Ok(format!("1100 points over 11 games, worst relative error {worst:.1e}"))
}

fn criterion_9() -> Outcome {
    let g = chicken2();
    let nf = chicken().to_normal_form();
    let curves = trace_critical_set(&g, 256).map_err(|e| e.to_string())?;
    ensure(!curves.is_empty(), || "empty critical set".into())?;
    let mut points = 0;
    for c in &curves {
        for p in &c.points {
            ensure(p.critical_value.abs() <= 1e-8, || format!("|c| = {:e}", p.critical_value.abs()))?;
            let betas = LogitParams::pair(p.beta1, p.beta2).unwrap();
            let qp = QCoordinates::new(p.q1, p.q2);
            let r = QCoordinates::from_profile(&logit_response(&nf, &qp.to_profile(), &betas).unwrap());
            let off = (r.q1 - p.q1).abs().max((r.q2 - p.q2).abs());
            ensure(off <= 1e-8, || format!("surface residual {off:e}"))?;
            points += 1;
        }
    }

    let locus = branch_locus(&curves, 10.0);
    let axis = AxisRange::new(0.0, 10.0, 41);
    let map = count_fixed_points_region(&g, axis, axis).map_err(|e| e.to_string())?;
    ensure(map.counts.iter().all(|&c| c == 1 || c == 3), || "count outside {1, 3}".into())?;
    let ones = map.counts.iter().filter(|&&c| c == 1).count();
    let threes = map.counts.len() - ones;
    ensure(ones > 0 && threes > 0, || format!("{ones} cells of 1, {threes} of 3"))?;
    let boundary = validate_region_boundary(&map, &locus);
    ensure(boundary.within_one_cell(), || format!("boundary {:.2} cells from the locus", boundary.max_cells))?;

    let crossings = sample_crossings(&g, &locus, 0.05, 7).map_err(|e| e.to_string())?;
    ensure(crossings.len() >= 10, || format!("only {} crossings", crossings.len()))?;
    for c in &crossings {
        ensure(c.before.abs_diff(c.after) == 2, || {
            format!("crossing at {:?}: {} -> {}", c.at, c.before, c.after)
        })?;
    }
    Ok(format!(
        "{points} traced points on {} arcs, {ones}/{threes} cells of 1/3, boundary within {:.2} cells, {} crossings change the count by 2",
        curves.len(),
        boundary.max_cells,
        crossings.len()
    ))
}

/// Worst `|a_ij + a_jk + a_ki − a_ik − a_kj − a_ji|` over all triples.
fn triple_oracle(a: &Matrix) -> f64 {
    let n = a.rows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let v = a.get(i, j) + a.get(j, k) + a.get(k, i) - a.get(i, k) - a.get(k, j) - a.get(j, i);
                worst = worst.max(v.abs());
            }
        }
    }
    worst
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..100 {
        let n = rng.random_range(3..=6);
        let mut a = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in i..n {
                let v = rng.random_range(-10.0..10.0f64);
                a[i][j] = v;
                a[j][i] = v;
            }
        }
        let m = Matrix::from_rows(&a).unwrap();
        let check = has_potential_condition(&m, 1e-9).map_err(|e| e.to_string())?;
        ensure(check.holds && check.witness.is_none(), || format!("symmetric matrix rejected: {a:?}"))?;
    }
    let mut failing = 0;
    while failing < 100 {
        let n = rng.random_range(3..=6);
        let mut a = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in i..n {
                let v = rng.random_range(-10.0..10.0f64);
                a[i][j] = v;
                a[j][i] = v;
            }
        }
        let (i, j) = (rng.random_range(0..n), rng.random_range(0..n));
        a[i][j] += rng.random_range(-1.0..1.0f64);
        let m = Matrix::from_rows(&a).unwrap();
        if triple_oracle(&m) <= 1e-6 {
            continue;
        }
        failing += 1;
        let check = has_potential_condition(&m, 1e-9).map_err(|e| e.to_string())?;
        let w = check.witness.ok_or_else(|| format!("no witness for {a:?}"))?;
        ensure(!check.holds, || format!("violating matrix accepted: {a:?}"))?;
        let v = m.get(w.i, w.j) + m.get(w.j, w.k) + m.get(w.k, w.i) - m.get(w.i, w.k) - m.get(w.k, w.j) - m.get(w.j, w.i);
        ensure(v.abs() > 1e-9 && (v - w.violation).abs() < 1e-12, || format!("bad witness {w:?}"))?;
    }
    Ok("100 symmetric pass, 100 violating matrices fail with a verified triple".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("prisoner's dilemma equilibrium", criterion_1),
        ("chicken equilibria", criterion_2),
        ("parity and endpoint containment", criterion_3),
        ("uv round trip", criterion_4),
        ("cusp roots and folds", criterion_5),
        ("stationary density and simulation", criterion_6),
        ("logit limits for chicken", criterion_7),
        ("jacobian partials", criterion_8),
        ("critical set and fold crossings", criterion_9),
        ("potential condition", criterion_10),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (tag, detail) = match run() {
            Ok(d) => ("PASS", d),
            Err(e) => {
                failed += 1;
                ("FAIL", e)
            }
        };
        println!("criterion {:>2} {tag}: {name}: {detail} [{:.2}s]", k + 1, start.elapsed().as_secs_f64());
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
