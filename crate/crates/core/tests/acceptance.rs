//! End-to-end acceptance run: one line per criterion, nonzero exit if any
//! criterion fails.

use std::cell::Cell as Counter;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;
use tverberg::exact::exact_tverberg;
use tverberg::generate::{generate, Family};
use tverberg::geom::{orientation, rat};
use tverberg::kernel::{common_point, CommonPoint};
use tverberg::planar::{birch_partition, centerpoint_2d, check_general_position_2d, tukey_depth_2d, tverberg_log_2d};
use tverberg::random::{random_coloring_partition, rng};
use tverberg::report::{run_cell, write_table, Cell, Certificate};
use tverberg::sites::miller_sheehy;
use tverberg::verify::brute_tukey_depth;
use tverberg::{rank_bound, solve, verify_site, Algorithm, BaseSolver, Point, PointSet, Site, SolveOptions};

/// Every site produced in this run goes through here.
struct Gate {
    checked: Counter<usize>,
    failed: Counter<usize>,
}

impl Gate {
    fn check(&self, set: &PointSet, site: &Site) -> bool {
        self.checked.set(self.checked.get() + 1);
        let ok = verify_site(set, site).valid;
        if !ok {
            self.failed.set(self.failed.get() + 1);
        }
        ok
    }
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn planar_ints(rng: &mut impl Rng, n: usize, range: i64) -> PointSet {
    PointSet::from_ints(&(0..n).map(|_| vec![rng.random_range(-range..=range), rng.random_range(-range..=range)]).collect::<Vec<_>>())
        .unwrap()
}

fn no_three_collinear(set: &PointSet) -> bool {
    let n = set.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let tri = [set.point(i).clone(), set.point(j).clone(), set.point(k).clone()];
                if orientation(&tri).unwrap() == 0 {
                    return false;
                }
            }
        }
    }
    true
}

fn exact_bound(gate: &Gate) -> Outcome {
    let mut rng = rng(101);
    let mut slowest = Duration::ZERO;
    let mut bad = Vec::new();
    for t in 0..50 {
        let n = [6, 9, 12][t % 3];
        let set = loop {
            let s = planar_ints(&mut rng, n, 1000);
            if no_three_collinear(&s) {
                break s;
            }
        };
        let start = Instant::now();
        let result = exact_tverberg(&set);
        let took = start.elapsed();
        slowest = slowest.max(took);
        match result {
            Ok(site) if site.rank() == n / 3 && gate.check(&set, &site) && took <= Duration::from_secs(5) => {}
            Ok(site) => bad.push(format!("instance {t}: rank {} in {took:?}", site.rank())),
            Err(e) => bad.push(format!("instance {t}: {e}")),
        }
    }
    outcome(bad.is_empty(), format!("50 instances, slowest {slowest:.2?}{}", failures(&bad)))
}

fn failures(bad: &[String]) -> String {
    if bad.is_empty() {
        String::new()
    } else {
        format!("; {} failures, first: {}", bad.len(), bad[0])
    }
}

fn birch_rank(gate: &Gate) -> Outcome {
    let mut rng = rng(102);
    let mut bad = Vec::new();
    for t in 0..100 {
        let n = rng.random_range(3..=400);
        let set = planar_ints(&mut rng, n, 1 << 20);
        match birch_partition(&set) {
            Ok(site) if site.rank() == n / 3 && gate.check(&set, &site) => {}
            Ok(site) => bad.push(format!("instance {t}: n={n} rank {}", site.rank())),
            Err(e) => bad.push(format!("instance {t}: {e}")),
        }
    }
    let big = generate(Family::Uniform, 100_000, 2, 7).unwrap();
    let start = Instant::now();
    let result = birch_partition(&big);
    let took = start.elapsed();
    match result {
        Ok(site) if site.rank() == 33_333 && took <= Duration::from_secs(60) && gate.check(&big, &site) => {}
        Ok(site) => bad.push(format!("n=100000: rank {} in {took:?}", site.rank())),
        Err(e) => bad.push(format!("n=100000: {e}")),
    }
    outcome(bad.is_empty(), format!("100 instances exact, n=100000 in {took:.1?}{}", failures(&bad)))
}

fn tukey_oracle() -> Outcome {
    let mut rng = rng(103);
    let mut bad = Vec::new();
    for t in 0..500 {
        let n = rng.random_range(1..=64);
        // Small coordinates force collinearities and repeated points.
        let range = if t % 2 == 0 { 6 } else { 1000 };
        let set = planar_ints(&mut rng, n, range);
        let q = match t % 3 {
            0 => set.point(rng.random_range(0..n)).clone(),
            1 => Point::new(vec![rat(rng.random_range(-3 * range..=3 * range), 2), rat(rng.random_range(-3 * range..=3 * range), 2)]),
            _ => Point::new(vec![rat(rng.random_range(-range..=range), 1), rat(rng.random_range(-range..=range), 1)]),
        };
        let fast = tukey_depth_2d(&set, &q).map(|r| r.depth);
        let slow = brute_tukey_depth(&set, &q);
        match (fast, slow) {
            (Ok(a), Ok(b)) if a == b => {}
            (a, b) => bad.push(format!("instance {t}: sweep {a:?}, brute {b:?}")),
        }
    }
    outcome(bad.is_empty(), format!("500 instances, {} mismatches{}", bad.len(), failures(&bad)))
}

fn support(gate: &Gate) -> Outcome {
    let mut rng = rng(104);
    let mut bad = Vec::new();
    let (mut shallow, mut deep) = (0, 0);
    while shallow + deep < 200 {
        let n = 3 * rng.random_range(1..=15);
        let set = planar_ints(&mut rng, n, 1000);
        let q = if (shallow + deep) % 2 == 0 {
            Point::new(vec![rat(rng.random_range(-7000..7000), 7), rat(rng.random_range(-7000..7000), 7)])
        } else {
            match centerpoint_2d(&set) {
                Ok(c) => c,
                Err(_) => continue,
            }
        };
        if check_general_position_2d(&set, &q).is_err() {
            continue;
        }
        let depth = brute_tukey_depth(&set, &q).unwrap();
        if 3 * depth <= n {
            shallow += 1;
        } else {
            deep += 1;
        }
        match tverberg_log_2d(&set, &q) {
            Ok((k, site)) if k == depth && site.rank() == (n / 3).min(depth) && site.point == q && gate.check(&set, &site) => {}
            Ok((k, site)) => bad.push(format!("n={n}: depth {depth}, reported {k}, rank {}", site.rank())),
            Err(e) => bad.push(format!("n={n}: {e}")),
        }
    }
    outcome(bad.is_empty() && shallow > 50 && deep > 50, format!("{shallow} shallow and {deep} deep queries{}", failures(&bad)))
}

fn miller_sheehy_bounds(gate: &Gate) -> Outcome {
    let mut rng = rng(105);
    let mut bad = Vec::new();
    let mut per_dim = [0usize; 3];
    for t in 0..100 {
        let d = [1, 2, 3][t % 3];
        let lo = 8 * d * (d + 1) * (d + 1);
        let n = rng.random_range(lo..=lo + 200);
        let set = generate(Family::Uniform, n, d, 1000 + t as u64).unwrap();
        let sq = (d + 1) * (d + 1);
        match miller_sheehy(&set) {
            Ok((site, stats)) => {
                let r = site.rank();
                let ok = r.is_power_of_two()
                    && r >= n.div_ceil(2 * sq)
                    && r <= 2 * n / sq
                    && stats.bound_violations(d).is_empty()
                    && gate.check(&set, &site);
                if ok {
                    per_dim[d - 1] += 1;
                } else {
                    bad.push(format!("d={d} n={n}: rank {r}, {:?}", stats.bound_violations(d)));
                }
            }
            Err(e) => bad.push(format!("d={d} n={n}: {e}")),
        }
    }
    outcome(bad.is_empty(), format!("100 instances (d=1,2,3: {per_dim:?} within bounds){}", failures(&bad)))
}

fn buffered(gate: &Gate) -> Outcome {
    let mut configs: Vec<(BaseSolver, usize, f64, usize)> = Vec::new();
    for d in [2, 3] {
        for delta in [0.25, 0.5] {
            for n in [1000, 5000] {
                configs.push((BaseSolver::Project, d, delta, n));
            }
        }
    }
    configs.extend([
        (BaseSolver::RandomLp, 2, 0.25, 1000),
        (BaseSolver::RandomLp, 2, 0.5, 1000),
        (BaseSolver::RandomLp, 3, 0.25, 600),
        (BaseSolver::RandomLp, 3, 0.5, 1200),
    ]);
    let mut bad = Vec::new();
    let mut worst = f64::INFINITY;
    for (i, &(base, d, delta, n)) in configs.iter().enumerate() {
        let set = generate(Family::Uniform, n, d, 200 + i as u64).unwrap();
        let opts = SolveOptions { seed: i as u64, delta, base, ..SolveOptions::default() };
        let bound = rank_bound(Algorithm::Buffered, n, d, delta);
        match solve(Algorithm::Buffered, &set, &opts) {
            Ok(site) if site.rank() >= bound && gate.check(&set, &site) => {
                worst = worst.min(site.rank() as f64 / bound as f64);
            }
            Ok(site) => bad.push(format!("{base:?} d={d} delta={delta} n={n}: rank {} < {bound}", site.rank())),
            Err(e) => bad.push(format!("{base:?} d={d} delta={delta} n={n}: {e}")),
        }
    }
    outcome(bad.is_empty(), format!("{} configurations, worst rank/bound {worst:.2}{}", configs.len(), failures(&bad)))
}

fn projection(gate: &Gate) -> Outcome {
    let mut bad = Vec::new();
    let mut runs = 0;
    for (d, div) in [(3, 6), (4, 9), (5, 18), (6, 27)] {
        for mult in [10, 30] {
            for seed in 0..2 {
                let n = div * mult;
                let set = generate(Family::Gaussian, n, d, 300 + seed + n as u64).unwrap();
                runs += 1;
                match solve(Algorithm::Project, &set, &SolveOptions::default()) {
                    Ok(site) if site.rank() >= n / div && gate.check(&set, &site) => {}
                    Ok(site) => bad.push(format!("d={d} n={n}: rank {}", site.rank())),
                    Err(e) => bad.push(format!("d={d} n={n}: {e}")),
                }
            }
        }
    }
    outcome(bad.is_empty(), format!("{runs} instances for d=3..6{}", failures(&bad)))
}

fn coloring_success(gate: &Gate) -> Outcome {
    let mut summary = Vec::new();
    let mut pass = true;
    for (d, n) in [(2, 3 * 279), (3, 2 * 533)] {
        let mut ok = 0;
        for seed in 0..100 {
            let set = generate(Family::Gaussian, n, d, 400 + seed).unwrap();
            let coloring = random_coloring_partition(&set, seed).unwrap();
            if let Ok(CommonPoint::Feasible { point, combinations }) = common_point(&coloring.classes, &set) {
                let batches = combinations.into_iter().map(tverberg::Batch::from_combination).collect();
                if gate.check(&set, &Site::new(point, batches, coloring.unused.clone())) {
                    ok += 1;
                }
            }
        }
        pass &= ok >= 90;
        summary.push(format!("d={d}: {ok}/100"));
    }
    outcome(pass, summary.join(", "))
}

fn lowdim(gate: &Gate) -> Outcome {
    let mut summary = Vec::new();
    let mut pass = true;
    for (d, n) in [(2, 900), (3, 1200)] {
        for delta in [0.25, 0.5] {
            let bound = rank_bound(Algorithm::Lowdim, n, d, delta);
            let mut ok = 0;
            for seed in 0..10 {
                let set = generate(Family::Uniform, n, d, 500 + seed).unwrap();
                let opts = SolveOptions { seed, delta, ..SolveOptions::default() };
                if let Ok(site) = solve(Algorithm::Lowdim, &set, &opts) {
                    if gate.check(&set, &site) && site.rank() >= bound {
                        ok += 1;
                    }
                }
            }
            pass &= ok >= 9;
            summary.push(format!("d={d} delta={delta}: {ok}/10"));
        }
    }
    outcome(pass, summary.join(", "))
}

fn determinism(gate: &Gate) -> Outcome {
    let mut bad = Vec::new();
    let planar = generate(Family::Gaussian, 900, 2, 600).unwrap();
    let spatial = generate(Family::Uniform, 600, 3, 601).unwrap();
    let runs: Vec<(Algorithm, &PointSet, SolveOptions)> = vec![
        (Algorithm::Birch, &planar, SolveOptions::default()),
        (Algorithm::MillerSheehy, &planar, SolveOptions::default()),
        (Algorithm::RandomLp, &planar, SolveOptions { seed: 3, ..SolveOptions::default() }),
        (Algorithm::Lowdim, &planar, SolveOptions { seed: 4, ..SolveOptions::default() }),
        (Algorithm::Project, &spatial, SolveOptions::default()),
        (Algorithm::Buffered, &spatial, SolveOptions { seed: 5, base: BaseSolver::RandomLp, ..SolveOptions::default() }),
    ];
    for (algo, set, opts) in &runs {
        let cert = || -> Option<String> {
            let site = solve(*algo, set, opts).ok()?;
            gate.check(set, &site);
            let bound = rank_bound(*algo, set.len(), set.dim(), opts.delta);
            Some(Certificate::from_site(&site, algo.name(), opts.seed, bound).to_json())
        };
        let (a, b) = (cert(), cert());
        if a.is_none() || a != b {
            bad.push(format!("{algo}: certificates differ"));
        }
    }
    let table = || {
        let mut rows = Vec::new();
        for algo in [Algorithm::Birch, Algorithm::MillerSheehy, Algorithm::Lowdim] {
            for seed in [1, 2] {
                let cell = Cell { family: Family::Shallow, d: 2, n: 120, algo, seed };
                rows.push(run_cell(cell, &SolveOptions::default()).unwrap());
            }
        }
        let mut out = Vec::new();
        write_table(&rows, false, &mut out).unwrap();
        out
    };
    if table() != table() {
        bad.push("bench tables differ".into());
    }
    outcome(bad.is_empty(), format!("{} certificates and one bench table compared byte for byte{}", runs.len(), failures(&bad)))
}

fn main() -> ExitCode {
    let gate = Gate { checked: Counter::new(0), failed: Counter::new(0) };
    let criteria: Vec<(&str, Box<dyn Fn(&Gate) -> Outcome>)> = vec![
        ("exact solver reaches n/3", Box::new(exact_bound)),
        ("planar partition rank and scale", Box::new(birch_rank)),
        ("planar depth equals brute force", Box::new(|_| tukey_oracle())),
        ("planar log rank is min(n/3, depth)", Box::new(support)),
        ("recycling engine rank and history", Box::new(miller_sheehy_bounds)),
        ("buffered engine rank", Box::new(buffered)),
        ("projection depths", Box::new(projection)),
        ("random coloring success rate", Box::new(coloring_success)),
        ("low-dimensional extraction", Box::new(lowdim)),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run(&gate);
        all &= o.pass;
        println!("criterion {:>2} {} {name}: {} ({:.1?})", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail, start.elapsed());
    }
    let det = determinism(&gate);
    let gate_ok = gate.failed.get() == 0;
    all &= gate_ok && det.pass;
    println!(
        "criterion 10 {} every emitted site verifies: {} sites checked, {} rejected",
        if gate_ok { "PASS" } else { "FAIL" },
        gate.checked.get(),
        gate.failed.get()
    );
    println!("criterion 11 {} determinism: {}", if det.pass { "PASS" } else { "FAIL" }, det.detail);
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
