//! Acceptance suite: one PASS/FAIL line per criterion, exact arithmetic,
//! fixed seeds. Runs as a plain binary so the lines are always printed.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use wblow_core::blowup::{build_fan, chart, cone_index, pushforward_monomial_check, valuation_ord_e};
use wblow_core::lifting::{verify_decomposition_range, LiftInstance};
use wblow_core::quotient::{
    action_lift_check, binomial_relation_2d, invariant_monoid_basis, semi_invariant_class,
};
use wblow_core::wideal::{find_stable_b, ideal_generators, product_vs_truncation, sigma_wt_poly};
use wblow_core::{CyclicQuotientType, ExpVec, Polynomial, Rat, WeightSystem};

struct Outcome {
    pass: bool,
    detail: String,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn random_sigma(rng: &mut ChaCha8Rng, n: usize, max: u64) -> Vec<u64> {
    loop {
        let s: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=max)).collect();
        if s.iter().fold(0, |g, &x| gcd(g, x)) == 1 {
            return s;
        }
    }
}

/// Every point of `[0, bounds[0]] x ... x [0, bounds[n-1]]`, lexicographically.
fn box_points(bounds: &[u64]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for &b in bounds {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=b as u32).map(move |e| {
                    let mut q = p.clone();
                    q.push(e);
                    q
                })
            })
            .collect();
    }
    out
}

fn numerator(s: &[u32], sigma: &[u64]) -> u64 {
    s.iter().zip(sigma).map(|(&e, &a)| e as u64 * a).sum()
}

/// Determinant of a small rational matrix given as `(num, den)` pairs, by
/// cofactor expansion over i128.
fn frac_det(m: &[Vec<(i128, i128)>]) -> (i128, i128) {
    fn reduce((p, q): (i128, i128)) -> (i128, i128) {
        let g = {
            let (mut a, mut b) = (p.abs(), q.abs());
            while b != 0 {
                (a, b) = (b, a % b);
            }
            a.max(1)
        };
        let s = if q < 0 { -1 } else { 1 };
        (s * p / g, s * q / g)
    }
    if m.len() == 1 {
        return reduce(m[0][0]);
    }
    let mut acc = (0i128, 1i128);
    for j in 0..m.len() {
        let minor: Vec<Vec<(i128, i128)>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, &x)| x).collect())
            .collect();
        let (p, q) = frac_det(&minor);
        let (a, b) = m[0][j];
        let sign = if j % 2 == 0 { 1 } else { -1 };
        let term = reduce((sign * a * p, b * q));
        acc = reduce((acc.0 * term.1 + term.0 * acc.1, acc.1 * term.1));
    }
    acc
}

fn criterion1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut mismatches = Vec::new();
    let mut charts_checked = 0;
    for _ in 0..100 {
        let n = rng.gen_range(2..=4);
        let sigma = random_sigma(&mut rng, n, 12);
        let m = rng.gen_range(1..=10);
        let w = WeightSystem::new(&sigma, m).unwrap();
        let fan = build_fan(&w);
        // N / Z^n is generated by e, of order m / gcd(m, a_1, ..., a_n)
        let order_e = m / sigma.iter().fold(m, |g, &a| gcd(g, a));
        for i in 0..n {
            charts_checked += 1;
            let ai = sigma[i];
            let expect: Vec<u64> = (0..n)
                .map(|j| if j == i { m % ai } else { (ai - sigma[j] % ai) % ai })
                .collect();
            let ch = chart(&w, i + 1).unwrap();
            if ch.quotient_type.order() != ai || ch.quotient_type.weights() != expect.as_slice() {
                mismatches.push(format!("{sigma:?}/{m} chart {}: {}", i + 1, ch.quotient_type));
            }
            let gens: Vec<Vec<(i128, i128)>> = (0..n)
                .filter(|&j| j != i)
                .map(|j| (0..n).map(|k| (i128::from(j == k), 1)).collect())
                .chain([sigma.iter().map(|&a| (a as i128, m as i128)).collect()])
                .collect();
            let (p, q) = frac_det(&gens);
            // |det| / covolume(N) with covolume 1 / order_e
            let oracle = p.abs() * order_e as i128;
            let index = cone_index(&fan, i + 1).unwrap();
            if oracle % q != 0 || (oracle / q) as u64 != index || index != ai {
                mismatches.push(format!("{sigma:?}/{m} cone {}: index {index}, oracle {oracle}/{q}", i + 1));
            }
        }
    }
    Outcome {
        pass: mismatches.is_empty(),
        detail: format!("100 systems, {charts_checked} charts, {} mismatch(es) {:?}", mismatches.len(), mismatches.first()),
    }
}

fn random_semi_invariant(rng: &mut ChaCha8Rng, w: &WeightSystem) -> Polynomial {
    let q = w.quotient_type();
    let n = w.n();
    let mut f = Polynomial::zero(n);
    let mut class = None;
    let terms = rng.gen_range(1..=6);
    while f.len() < terms {
        let s = ExpVec::new((0..n).map(|_| rng.gen_range(0..=6)).collect()).unwrap();
        let c = q.monomial_class(&s).unwrap();
        if *class.get_or_insert(c) != c || f.coefficient(&s) != Rat::zero() {
            continue;
        }
        let coeff = loop {
            let v: i64 = rng.gen_range(-9..=9);
            if v != 0 {
                break v;
            }
        };
        f.add_term(s, Rat::from(coeff)).unwrap();
    }
    f
}

fn criterion2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut failures = Vec::new();
    for _ in 0..200 {
        let n = rng.gen_range(2..=4);
        let sigma = random_sigma(&mut rng, n, 9);
        let m = rng.gen_range(1..=8);
        let w = WeightSystem::new(&sigma, m).unwrap();
        let f = random_semi_invariant(&mut rng, &w);
        assert!(semi_invariant_class(&f, &w.quotient_type()).is_ok());
        let min_num = f.support().map(|s| numerator(s.entries(), &sigma)).min().unwrap();
        let oracle = Rat::ratio(min_num, m);
        let weight = sigma_wt_poly(&f, &w).unwrap();
        for i in 1..=n {
            match valuation_ord_e(&f, &w, i) {
                Ok(v) if v == oracle && v == weight => {}
                other => failures.push(format!("{sigma:?}/{m} f={f} chart {i}: {other:?}")),
            }
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: format!("200 polynomials, {} failure(s) {:?}", failures.len(), failures.first()),
    }
}

fn criterion3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let systems: Vec<(Vec<u64>, u64)> = (0..20)
        .map(|_| {
            let n = rng.gen_range(2..=3);
            (random_sigma(&mut rng, n, 4), rng.gen_range(1..=4))
        })
        .collect();
    let results: Vec<(u64, u64, Vec<String>)> = systems
        .par_iter()
        .map(|(sigma, m)| {
            let w = WeightSystem::new(sigma, *m).unwrap();
            let big_m = sigma.iter().fold(1, |l, &a| lcm(l, a));
            let mut levels = 0;
            let mut points = 0;
            let mut bad = Vec::new();
            for a in 0..=3 * big_m {
                levels += 1;
                match pushforward_monomial_check(&w, a) {
                    Ok(c) => {
                        points += c.points;
                        // independent count of box points of weight >= a
                        let bounds: Vec<u64> = c.bounds.iter().map(|&b| b as u64).collect();
                        let members = box_points(&bounds)
                            .iter()
                            .filter(|s| numerator(s, sigma) >= a * m)
                            .count() as u64;
                        if !c.holds() || members != c.members {
                            bad.push(format!("{sigma:?}/{m} a={a}: {:?}, members {} vs {members}", c.mismatch, c.members));
                        }
                    }
                    Err(e) => bad.push(format!("{sigma:?}/{m} a={a}: {e}")),
                }
            }
            (levels, points, bad)
        })
        .collect();
    let levels: u64 = results.iter().map(|r| r.0).sum();
    let points: u64 = results.iter().map(|r| r.1).sum();
    let bad: Vec<&String> = results.iter().flat_map(|r| &r.2).collect();
    Outcome {
        pass: bad.is_empty(),
        detail: format!("20 systems, {levels} levels, {points} monomials, {} mismatch(es) {:?}", bad.len(), bad.first()),
    }
}

fn tuples(len: usize, max: u64) -> Vec<Vec<u64>> {
    box_points(&vec![max - 1; len])
        .into_iter()
        .map(|p| p.into_iter().map(|e| e as u64 + 1).collect())
        .collect()
}

fn criterion4() -> Outcome {
    let mut instances = Vec::new();
    for len in [2, 3] {
        for sp in tuples(len, 6) {
            for m in 1..=5 {
                for a in 1..=3 {
                    instances.push((sp.clone(), m, a));
                }
            }
        }
    }
    let d_max = 8;
    let results: Vec<(bool, u64, u64, Vec<String>)> = instances
        .par_iter()
        .map(|(sp, m, a)| {
            let inst = LiftInstance::new(sp, *m, *a).unwrap();
            let r = verify_decomposition_range(&inst, d_max, None).unwrap();
            let mut tried = 0;
            let mut caught = 0;
            let mut missed = Vec::new();
            if *m == 1 {
                let good = inst.a_n as i64;
                for delta in [-3i64, -2, -1, 1, 2, 3] {
                    let v = good + delta;
                    if v < 1 {
                        continue;
                    }
                    tried += 1;
                    let bad = inst.with_last_weight(v as u64).unwrap();
                    if verify_decomposition_range(&bad, d_max, None).unwrap().passed() {
                        missed.push(format!("{sp:?} a={a} a_n={v}"));
                    } else {
                        caught += 1;
                    }
                }
            }
            (r.passed(), tried, caught, missed)
        })
        .collect();
    let failures = results.iter().filter(|r| !r.0).count();
    let tried: u64 = results.iter().map(|r| r.1).sum();
    let caught: u64 = results.iter().map(|r| r.2).sum();
    let missed: Vec<&String> = results.iter().flat_map(|r| &r.3).collect();
    let rate = caught as f64 / tried as f64;
    Outcome {
        pass: failures == 0 && rate >= 0.95,
        detail: format!(
            "{} instances, d <= {d_max}: {failures} failure(s); mutations at m = 1 caught {caught}/{tried} = {:.2}% (need >= 95%), missed {:?}",
            instances.len(),
            100.0 * rate,
            missed
        ),
    }
}

fn criterion5() -> Outcome {
    let mut problems = Vec::new();
    for rm in 2..=12u64 {
        let q = CyclicQuotientType::from_signed(rm, &[1, -1]).unwrap();
        let basis = invariant_monoid_basis(&q, rm).unwrap();
        let got: BTreeSet<Vec<u32>> = basis.elements.iter().map(|s| s.entries().to_vec()).collect();
        let expect: BTreeSet<Vec<u32>> = [vec![rm as u32, 0], vec![0, rm as u32], vec![1, 1]].into_iter().collect();
        // brute force: nonzero invariants with no smaller nonzero invariant below them
        let invariant = |s: &[u32]| (s[0] as u64 + (rm - 1) * s[1] as u64).is_multiple_of(rm) && s.iter().any(|&e| e > 0);
        let pts = box_points(&[rm, rm]);
        let oracle: BTreeSet<Vec<u32>> = pts
            .iter()
            .filter(|s| invariant(s))
            .filter(|s| !pts.iter().any(|t| invariant(t) && *t != **s && t[0] <= s[0] && t[1] <= s[1]))
            .cloned()
            .collect();
        if !basis.complete || got != expect || oracle != expect {
            problems.push(format!("rm={rm}: basis {got:?}, oracle {oracle:?}"));
        }
        let rel = binomial_relation_2d(&q).unwrap();
        if !(rel.holds() && rel.alpha == 1 && rel.beta == 1 && rel.gamma == rm) {
            problems.push(format!("rm={rm}: relation {rel:?}"));
        }
    }
    let mut actions = 0;
    for r in 1..=6u64 {
        for m in 1..=4u64 {
            for a in 1..=r as i64 {
                if gcd(a as u64, r) != 1 {
                    continue;
                }
                actions += 1;
                let rep = action_lift_check(r, m, a).unwrap();
                let modulus = r * r * m;
                let (wu, wv) = (a as u64 % modulus, (r * m - a as u64) % modulus);
                let induced = [(r * m * wu) % modulus, (r * m * wv) % modulus, (wu + wv) % modulus];
                let expect = [(r * m * a as u64) % modulus, (modulus - (r * m * a as u64) % modulus) % modulus, (r * m) % modulus];
                if !rep.holds || rep.induced_weights != induced || induced != expect {
                    problems.push(format!("action r={r} m={m} a={a}: {rep:?}"));
                }
                for n in 1..=4 {
                    let g = Polynomial::from_terms(
                        4,
                        [
                            (ExpVec::new(vec![1, 1, 0, 0]).unwrap(), Rat::one()),
                            (ExpVec::new(vec![0, 0, (r * m) as u32, 0]).unwrap(), Rat::one()),
                            (ExpVec::new(vec![0, 0, 0, n]).unwrap(), Rat::one()),
                        ],
                    )
                    .unwrap();
                    let amb = CyclicQuotientType::from_signed(r, &[a, -a, 1, 0]).unwrap();
                    if semi_invariant_class(&g, &amb) != Ok(0) {
                        problems.push(format!("class r={r} m={m} a={a} n={n}"));
                    }
                }
            }
        }
    }
    Outcome {
        pass: problems.is_empty(),
        detail: format!("rm = 2..12, {actions} lifted actions, {} problem(s) {:?}", problems.len(), problems.first()),
    }
}

fn criterion6() -> Outcome {
    let mut systems = Vec::new();
    for len in [2, 3] {
        for sigma in tuples(len, 5) {
            if sigma.iter().fold(0, |g, &x| gcd(g, x)) != 1 {
                continue;
            }
            for m in 1..=4 {
                systems.push((sigma.clone(), m));
            }
        }
    }
    let results: Vec<(Option<u64>, Vec<String>)> = systems
        .par_iter()
        .map(|(sigma, m)| {
            let w = WeightSystem::new(sigma, *m).unwrap();
            let mut errs = Vec::new();
            for c in 1..=2u64 {
                let b = Rat::ratio(c * w.lcm(), *m);
                for d in 2..=3 {
                    if let Err(e) = product_vs_truncation(&w, &b, d) {
                        errs.push(format!("{sigma:?}/{m} b={b} d={d}: {e}"));
                    }
                }
            }
            let stable = match find_stable_b(&w, 3, 8) {
                Ok(s) => s.map(|s| s.multiple),
                Err(e) => {
                    errs.push(format!("{sigma:?}/{m}: {e}"));
                    None
                }
            };
            if stable.is_none() && errs.is_empty() {
                errs.push(format!("{sigma:?}/{m}: no stable b within 8 multiples"));
            }
            (stable, errs)
        })
        .collect();
    let errs: Vec<&String> = results.iter().flat_map(|r| &r.1).collect();
    let worst = results.iter().filter_map(|r| r.0).max().unwrap_or(0);
    Outcome {
        pass: errs.is_empty(),
        detail: format!(
            "{} systems (gcd 1): {} problem(s) {:?}; largest multiple needed {worst}",
            systems.len(),
            errs.len(),
            errs.first()
        ),
    }
}

fn criterion7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut bad = Vec::new();
    let mut total_points = 0u64;
    for _ in 0..50 {
        let n = rng.gen_range(2..=3);
        let sigma = random_sigma(&mut rng, n, 7);
        let m = rng.gen_range(1..=6);
        let (kp, kq) = (rng.gen_range(0..=40u64), rng.gen_range(1..=5u64));
        let k = Rat::new(kp, kq).unwrap();
        let w = WeightSystem::new(&sigma, m).unwrap();
        let ideal = ideal_generators(&w, &k).unwrap();
        let t = (kp * m).div_ceil(kq);
        let bounds: Vec<u64> = sigma.iter().map(|&a| t.div_ceil(a) + 1).collect();
        let pts = box_points(&bounds);
        total_points += pts.len() as u64;
        let member = |s: &[u32]| numerator(s, &sigma) >= t;
        let oracle_gens: BTreeSet<Vec<u32>> = pts
            .iter()
            .filter(|s| member(s))
            .filter(|s| {
                (0..n).all(|i| {
                    s[i] == 0 || {
                        let mut u = (*s).clone();
                        u[i] -= 1;
                        !member(&u)
                    }
                })
            })
            .cloned()
            .collect();
        let gens: BTreeSet<Vec<u32>> = ideal.gens.iter().map(|g| g.entries().to_vec()).collect();
        let generated_equal = pts.iter().all(|s| {
            let by_gens = ideal.gens.iter().any(|g| g.entries().iter().zip(s.iter()).all(|(a, b)| a <= b));
            by_gens == member(s)
        });
        if gens != oracle_gens || !generated_equal {
            bad.push(format!("{sigma:?}/{m} k={k}: {} vs {} generators", gens.len(), oracle_gens.len()));
        }
    }
    Outcome {
        pass: bad.is_empty(),
        detail: format!("50 ideals, {total_points} box monomials, {} mismatch(es) {:?}", bad.len(), bad.first()),
    }
}

fn cli(args: &[&str], threads: Option<&str>) -> Vec<u8> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_wblow"));
    cmd.args(args).env_remove("WBLOW_MAX_ENUM");
    match threads {
        Some(t) => cmd.env("RAYON_NUM_THREADS", t),
        None => cmd.env_remove("RAYON_NUM_THREADS"),
    };
    let out = cmd.output().expect("binary runs");
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn criterion8() -> Outcome {
    let commands: [&[&str]; 4] = [
        &["example33", "--r", "3", "--m", "2", "--a", "1", "--format", "json"],
        &["charts", "1/7(2,3,5)", "--format", "json"],
        &["lift-check", "--sigma-prime", "2,3,5", "--m", "1", "--a", "2", "--dmax", "8", "--format", "json"],
        &["--format", "json", "charts", "1/10(1,4,9,12)"],
    ];
    let mut differing = Vec::new();
    let mut bytes = 0;
    for args in commands {
        let first = cli(args, None);
        let runs = [cli(args, None), cli(args, Some("1")), cli(args, Some("4"))];
        bytes += first.len();
        if runs.iter().any(|r| *r != first) {
            differing.push(args[0]);
        }
    }
    Outcome {
        pass: differing.is_empty(),
        detail: format!("4 commands x 4 runs (default, default, 1 thread, 4 threads), {bytes} bytes each pass, differing {differing:?}"),
    }
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("chart formula and cone index", Duration::from_secs(30), criterion1),
        ("valuation consistency", Duration::from_secs(30), criterion2),
        ("push-forward identity on monomials", Duration::from_secs(120), criterion3),
        ("lifting decomposition and mutation", Duration::from_secs(300), criterion4),
        ("cyclic cover example", Duration::from_secs(10), criterion5),
        ("truncation containment and stable b", Duration::from_secs(180), criterion6),
        ("generator minimality oracle", Duration::from_secs(60), criterion7),
        ("cli determinism", Duration::from_secs(120), criterion8),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let pass = outcome.pass && elapsed <= *limit;
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {}: {} {name}: {} [{:.2}s, limit {}s]",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            outcome.detail,
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
