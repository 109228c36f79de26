//! Acceptance suite: ten end-to-end criteria, one status line each.
//!
//! Every criterion returns its serialized reports so the last criterion can
//! rerun the others and compare bytes.

use std::fmt::Write as _;
use std::process::ExitCode;
use std::time::Instant;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pwsample::construct::{
    build_bessel, build_sampling, canonical_example, exhaust_general, ConstructionReport, ExhaustMode, SamplingSet,
    SetKind,
};
use pwsample::selection::{
    barrier_ratio, binomial, brute_force_best, bss_select, rit_constant, sampling_constant, Objective, VectorSystem,
    MAX_SUBSETS,
};
use pwsample::spectrum::{complement, GridSpectrum, IntervalSet};
use pwsample::verify::{
    densities, duality_check, montecarlo_timedomain, riesz_bounds, sampling_bounds, section_lambda_min,
};
use pwsample::Density;

struct Outcome {
    pass: bool,
    detail: String,
    artifact: String,
}

fn random_grid(rng: &mut ChaCha8Rng, m: usize, n: usize) -> GridSpectrum {
    GridSpectrum::new(m, sample(rng, m, n).into_vec()).unwrap()
}

fn json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string(value).unwrap()
}

fn csv_rows(reports: &[&ConstructionReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(pwsample::construct::CSV_COLUMNS).unwrap();
    for r in reports {
        w.write_record(r.csv_record()).unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

fn canonical() -> Outcome {
    let mut pass = true;
    let mut artifact = String::new();
    let mut cases = 0;
    for m in [1usize, 2, 4, 8, 16] {
        let g = GridSpectrum::new(m, vec![0]).unwrap();
        for j in 0..m {
            let lam = canonical_example(m, j).unwrap();
            let b = sampling_bounds(&g, &lam).unwrap();
            let want = 1.0 / m as f64;
            let d = densities(&lam);
            pass &= (b.lower - want).abs() <= 1e-12 && (b.upper - want).abs() <= 1e-12;
            pass &= d.d_minus == Density::new(1, m as u64) && d.d_plus == d.d_minus && d.d_sharp == d.d_minus;
            artifact.push_str(&json(&b));
            cases += 1;
        }
    }
    Outcome { pass, detail: format!("{cases} offsets"), artifact }
}

/// The seeded ensemble shared by the sampling, ratio and duality criteria.
fn sampling_ensemble() -> Vec<(GridSpectrum, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut cases = Vec::new();
    let grid = itertools::iproduct!([32usize, 64, 128], [16usize, 8, 4], [0.5f64, 1.0, 3.0]).collect::<Vec<_>>();
    for i in 0..200 {
        let (m, inv, d) = grid[i % grid.len()];
        cases.push((random_grid(&mut rng, m, m / inv), d));
    }
    cases
}

fn sampling_certificates(cases: &[(GridSpectrum, f64)]) -> (Outcome, Vec<ConstructionReport>) {
    let mut pass = true;
    let mut failures = 0;
    let mut reports = Vec::new();
    for (g, d) in cases {
        match build_sampling(g, *d) {
            Ok(r) => {
                let limit = ((1.0 + d) * g.n() as f64 - 1e-9).ceil() as usize;
                let target = sampling_constant(*d) * g.n() as f64 / g.m() as f64;
                let ok = r.set.len() <= limit && r.certified_lower >= target;
                if !ok {
                    failures += 1;
                }
                pass &= ok;
                reports.push(r);
            }
            Err(e) => {
                eprintln!("  sampling m={} n={} d={d}: {e}", g.m(), g.n());
                failures += 1;
                pass = false;
            }
        }
    }
    let refs: Vec<&ConstructionReport> = reports.iter().collect();
    let outcome =
        Outcome { pass, detail: format!("{} cases, {failures} failures", cases.len()), artifact: csv_rows(&refs) };
    (outcome, reports)
}

fn weighted_ratio(cases: &[(GridSpectrum, f64)]) -> Outcome {
    let mut pass = true;
    let mut worst: f64 = 0.0;
    let mut artifact = String::new();
    for (g, d) in cases {
        let q = 1.0 + d;
        let sys = VectorSystem::fourier_rows(g.m(), g.cells()).unwrap();
        let r = match bss_select(&sys, q) {
            Ok(r) => r,
            Err(e) => {
                eprintln!("  weighted m={} n={} d={d}: {e}", g.m(), g.n());
                pass = false;
                continue;
            }
        };
        let bound = barrier_ratio(q) * (1.0 + 1e-9);
        pass &= r.lambda_min > 0.0 && r.ratio() <= bound;
        worst = worst.max(r.ratio() / barrier_ratio(q));
        for s in &r.steps {
            pass &= s.u.unwrap() - s.lambda_max > 0.0 && s.lambda_min - s.l.unwrap() > 0.0;
        }
        let _ = write!(artifact, "{}:{};", json(&r.indices), json(&r.weights));
    }
    Outcome { pass, detail: format!("worst ratio/bound = {worst:.4}"), artifact }
}

fn brute_force_agreement() -> Outcome {
    let mut pass = true;
    let mut checked = 0;
    let mut artifact = String::new();
    for m in 1..=12usize {
        for n in 1..=4usize.min(m) {
            for cells in itertools::Itertools::combinations(0..m, n) {
                let g = GridSpectrum::new(m, cells).unwrap();
                for d in [1.0, 3.0] {
                    let k = ((1.0f64 + d) * n as f64).ceil() as usize;
                    if k <= m && binomial(m, k) > MAX_SUBSETS {
                        continue;
                    }
                    let r = build_sampling(&g, d).unwrap();
                    let sys = VectorSystem::fourier_rows(m, g.cells()).unwrap();
                    let (_, best_at_size) = brute_force_best(&sys, r.set.len(), Objective::MaxLambdaMin).unwrap();
                    let target = sampling_constant(d) * n as f64 / m as f64;
                    let (_, best_full) = brute_force_best(&sys, k.min(m), Objective::MaxLambdaMin).unwrap();
                    pass &= best_at_size >= r.certified_lower - 1e-12 && best_full >= target;
                    let _ = write!(artifact, "{:.12e},", best_at_size);
                    checked += 1;
                }
            }
        }
    }
    Outcome { pass, detail: format!("{checked} instances"), artifact }
}

fn duality(reports: &[ConstructionReport]) -> Outcome {
    let mut pass = true;
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    let mut artifact = String::new();
    for r in reports {
        if r.set.len() >= r.spectrum.m {
            continue;
        }
        let g = GridSpectrum::new(r.spectrum.m, r.spectrum.cells.clone()).unwrap();
        let dual = duality_check(&g, &r.set).unwrap();
        pass &= dual.factor_two_pass && dual.exact_identity_pass;
        worst = worst.max((dual.a.unwrap() - dual.b).abs());
        artifact.push_str(&json(&dual));
        checked += 1;
    }

    // finite sections of the complementary exponentials over T ∖ S
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut section_gap: f64 = 0.0;
    for case in 0..10 {
        let m = [4usize, 6, 8][case % 3];
        let n = 1 + case % (m / 2);
        let g = random_grid(&mut rng, m, n);
        let k = (n + 1 + case % 2).min(m - 1);
        let lam = SamplingSet::new(m, sample(&mut rng, m, k).into_vec(), SetKind::Sampling).unwrap();
        let b = sampling_bounds(&g, &lam).unwrap().lower;
        let omega = complement(&g).unwrap();
        let rest: Vec<usize> = (0..m).filter(|r| !lam.contains_residue(*r)).collect();
        let gamma = SamplingSet::new(m, rest, SetKind::Riesz).unwrap();
        let a = riesz_bounds(&omega, &gamma).unwrap().lower;
        pass &= (a - b).abs() <= 1e-9;
        let ivs = omega.to_intervals();
        let mut prev = f64::INFINITY;
        for size in [gamma.len(), 10, 25, 50, 100] {
            let v = section_lambda_min(&ivs, &gamma, size).unwrap();
            pass &= v <= prev + 1e-12 && v >= a - 1e-12;
            prev = v;
        }
        section_gap = section_gap.max(prev - a);
        pass &= prev - a <= 1e-3;
        let _ = write!(artifact, "{prev:.12e},");
    }
    Outcome {
        pass,
        detail: format!("{checked} cases, max |A-B| = {worst:.2e}, section gap at 100 = {section_gap:.2e}"),
        artifact,
    }
}

fn riesz_sets() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut pass = true;
    let mut cases = 0;
    let mut failures = 0;
    let mut artifact = String::new();
    for (m, frac, d) in itertools::iproduct!([16usize, 64], [4usize, 2], [0.25f64, 0.5, 0.75]) {
        for _ in 0..5 {
            let g = random_grid(&mut rng, m, m / frac);
            cases += 1;
            match pwsample::construct::build_riesz(&g, d) {
                Ok(r) => {
                    let need = ((1.0 - d) * g.n() as f64 - 1e-9).ceil() as usize;
                    let target = rit_constant(d) * g.n() as f64 / m as f64;
                    let ok = r.set.len() >= need && r.certified_lower >= target;
                    if !ok {
                        failures += 1;
                    }
                    pass &= ok;
                    artifact.push_str(&json(&(r.set.residues(), r.certified_lower)));
                }
                Err(e) => {
                    eprintln!("  riesz m={m} n={} d={d}: {e}", g.n());
                    failures += 1;
                    pass = false;
                }
            }
        }
    }
    Outcome { pass, detail: format!("{cases} cases, {failures} failures"), artifact }
}

fn bessel_sets() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut constants = Vec::new();
    let mut pass = true;
    let mut artifact = String::new();
    for _ in 0..100 {
        let g = random_grid(&mut rng, 64, 8);
        let r = build_bessel(&g, Some(9)).unwrap();
        let c = r.constant.unwrap();
        pass &= r.set.len() == 9 && c <= 20.0;
        constants.push(c);
        artifact.push_str(&json(&(r.set.residues(), r.certified_upper)));
    }
    let small = constants.iter().filter(|&&c| c <= 4.0).count();
    pass &= small >= 80;
    constants.sort_by(f64::total_cmp);
    let q = |p: f64| constants[((constants.len() - 1) as f64 * p).round() as usize];
    Outcome {
        pass,
        detail: format!(
            "C min {:.3} median {:.3} p90 {:.3} max {:.3}; {small}/100 within 4",
            q(0.0),
            q(0.5),
            q(0.9),
            q(1.0)
        ),
        artifact,
    }
}

fn pipeline() -> Outcome {
    let s = IntervalSet::new(vec![(0.3, 0.9), (2.0, 2.5)]).unwrap();
    let measure = s.measure();
    let schedule: Vec<usize> = (4..=10).map(|p| 1usize << p).collect();
    let stages = exhaust_general(&s, 1.0, &schedule, ExhaustMode::Sampling).unwrap();
    let mut pass = stages.len() == schedule.len();
    let mut prev = 0.0;
    for st in &stages {
        let mu = st.measure.to_f64();
        let n = st.report.n();
        pass &= mu >= prev && (measure - mu).abs() <= 4.0 / st.m as f64;
        pass &= st.report.certified_lower >= sampling_constant(1.0) * mu;
        pass &= st.report.set.len() <= 2 * n;
        prev = mu;
    }
    let refs: Vec<&ConstructionReport> = stages.iter().map(|s| &s.report).collect();
    let last = stages.last().map(|s| s.measure.to_string()).unwrap_or_default();
    Outcome {
        pass,
        detail: format!("{} stages, |S| = {measure:.6}, final |S_m| = {last}", stages.len()),
        artifact: csv_rows(&refs) + &json(&stages.iter().map(|s| (&s.gamma, s.gamma_riesz_lower)).collect::<Vec<_>>()),
    }
}

fn montecarlo() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut pass = true;
    let mut artifact = String::new();
    let mut widest: f64 = 0.0;
    for case in 0..10u64 {
        let m = [8usize, 16, 32][case as usize % 3];
        let n = 1 + (case as usize) % 4;
        let g = random_grid(&mut rng, m, n);
        let report = build_sampling(&g, [0.5, 1.0, 3.0][case as usize % 3]).unwrap();
        let short = montecarlo_timedomain(&g, &report.set, 100 + case, 50).unwrap();
        let long = montecarlo_timedomain(&g, &report.set, 100 + case, 200).unwrap();
        pass &= long.pass && long.signals >= 20;
        pass &= long.ratio_min >= long.lower * 0.95 && long.ratio_max <= long.upper * 1.05;
        // truncated sums only grow with K and approach the exact quadratic form
        pass &= long.ratio_min >= short.ratio_min && long.ratio_max >= short.ratio_max;
        widest = widest.max(long.upper / long.ratio_max - 1.0).max(1.0 - long.ratio_min / long.lower);
        artifact.push_str(&json(&short));
        artifact.push_str(&json(&long));
    }
    Outcome { pass, detail: format!("10 cases, worst relative slack at K=200 {widest:.2e}"), artifact }
}

type Criterion = (&'static str, f64, Box<dyn Fn() -> (Outcome, f64)>);

fn timed(f: impl Fn() -> Outcome + 'static) -> Box<dyn Fn() -> (Outcome, f64)> {
    Box::new(move || {
        let t = Instant::now();
        let o = f();
        (o, t.elapsed().as_secs_f64())
    })
}

fn main() -> ExitCode {
    let cases = sampling_ensemble();
    let cases2 = cases.clone();
    let cases3 = cases.clone();
    let cases5 = cases.clone();
    let criteria: Vec<Criterion> = vec![
        ("canonical identity", 1.0, timed(canonical)),
        ("sampling certificates", 60.0, timed(move || sampling_certificates(&cases2).0)),
        ("weighted ratio and barrier logs", 60.0, timed(move || weighted_ratio(&cases3))),
        ("brute-force oracle agreement", 60.0, timed(brute_force_agreement)),
        ("duality", 60.0, timed(move || duality(&sampling_certificates(&cases5).1))),
        ("Riesz sets", 30.0, timed(riesz_sets)),
        ("Bessel sets", 30.0, timed(bessel_sets)),
        ("exhaustion pipeline", 120.0, timed(pipeline)),
        ("time-domain sandwich", 60.0, timed(montecarlo)),
    ];

    let mut all = true;
    let mut first = Vec::new();
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let (o, secs) = run();
        let ok = o.pass;
        all &= ok;
        println!(
            "criterion {:>2} {:<34} {}  ({secs:.2}s, budget {budget:.0}s)  {}",
            i + 1,
            name,
            if ok { "PASS" } else { "FAIL" },
            o.detail
        );
        if secs > *budget {
            println!("             note: over runtime budget");
        }
        first.push(o.artifact);
    }

    let t = Instant::now();
    let same = criteria.iter().zip(&first).all(|((_, _, run), a)| run().0.artifact == *a);
    all &= same;
    println!(
        "criterion 10 {:<34} {}  ({:.2}s)  {} report streams compared",
        "determinism",
        if same { "PASS" } else { "FAIL" },
        t.elapsed().as_secs_f64(),
        first.len()
    );

    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
