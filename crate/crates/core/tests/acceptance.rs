//! Acceptance suite. Prints one PASS / FAIL / SKIPPED-DATA line per
//! criterion and exits non-zero if any criterion fails.
//!
//! Criterion 7 needs the ℓ-adic generator catalog; point `MODCURVE_CATALOG`
//! at a file in the catalog format to run it.

use std::fs::File;
use std::io::BufReader;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use modcurve_core::catalog::{self, CatalogEntry};
use modcurve_core::geometry::curve_data;
use modcurve_core::points::{self, GaloisImageContext};
use modcurve_core::subgroup::gl2_order;
use modcurve_core::zmod::unit_subgroups_containing_minus_one;
use modcurve_core::{Mat2, SubgroupSpec};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

enum Outcome {
    Pass(String),
    Fail(String),
    SkippedData(String),
}

type Check = fn() -> Outcome;

fn ensure(ok: bool, pass: String, fail: String) -> Outcome {
    if ok {
        Outcome::Pass(pass)
    } else {
        Outcome::Fail(fail)
    }
}

fn table1() -> Outcome {
    let rows = match catalog::emit_table1() {
        Ok(rows) => rows,
        Err(e) => return Outcome::Fail(e.to_string()),
    };
    let got: Vec<(u32, u64, u64)> = rows
        .iter()
        .map(|r| (r.ell_n, r.delta_order, r.genus))
        .collect();
    let want = vec![(25, 4, 4), (25, 10, 0), (27, 6, 1), (32, 4, 5), (32, 8, 1)];
    ensure(
        got == want,
        format!("{got:?}"),
        format!("got {got:?}, want {want:?}"),
    )
}

fn table2() -> Outcome {
    let rows = match catalog::emit_table2() {
        Ok(rows) => rows,
        Err(e) => return Outcome::Fail(e.to_string()),
    };
    let genera: Vec<u64> = rows.iter().map(|r| r.genus).collect();
    let bounds: Vec<u64> = rows.iter().map(|r| r.bound).collect();
    let want_g = vec![4, 0, 19, 3, 106, 26, 516, 340, 164, 50, 24, 16];
    let want_b = vec![30, 12, 56, 24, 132, 60, 546, 364, 182, 84, 42, 28];
    ensure(
        genera == want_g && bounds == want_b,
        format!("genera {genera:?}, bounds {bounds:?}"),
        format!("genera {genera:?} (want {want_g:?}), bounds {bounds:?} (want {want_b:?})"),
    )
}

fn formulae() -> Outcome {
    match catalog::verify_formulae(16) {
        Ok(checks) => {
            let bad: Vec<_> = checks.iter().filter(|c| !c.ok).collect();
            ensure(
                bad.is_empty(),
                format!("{} (N, Δ) pairs with N ≤ 16", checks.len()),
                format!("mismatches: {bad:?}"),
            )
        }
        Err(e) => Outcome::Fail(e.to_string()),
    }
}

// Classical formulas for Γ₀(N) and ±Γ₁(N), written without the library.

fn prime_factors(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn phi(n: u64) -> u64 {
    prime_factors(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn divisors_of(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

#[derive(Debug, PartialEq)]
struct Classical {
    mu: u64,
    nu2: u64,
    nu3: u64,
    nu_inf: u64,
    genus: u64,
}

fn with_genus(mu: u64, nu2: u64, nu3: u64, nu_inf: u64) -> Classical {
    let twelve_g = 12 + mu as i64 - 3 * nu2 as i64 - 4 * nu3 as i64 - 6 * nu_inf as i64;
    assert!(twelve_g >= 0 && twelve_g % 12 == 0);
    Classical {
        mu,
        nu2,
        nu3,
        nu_inf,
        genus: (twelve_g / 12) as u64,
    }
}

fn gamma0(n: u64) -> Classical {
    let ps = prime_factors(n);
    let mu = ps.iter().fold(n, |acc, &(p, _)| acc / p * (p + 1));
    let minus_one = |p: u64| match p % 4 {
        1 => 2,
        3 => 0,
        _ => 1,
    };
    let minus_three = |p: u64| match p % 3 {
        0 => 1,
        1 => 2,
        _ => 0,
    };
    let nu2 = if n.is_multiple_of(4) {
        0
    } else {
        ps.iter().map(|&(p, _)| minus_one(p)).product()
    };
    let nu3 = if n.is_multiple_of(9) {
        0
    } else {
        ps.iter().map(|&(p, _)| minus_three(p)).product()
    };
    let nu_inf = divisors_of(n).iter().map(|&d| phi(gcd(d, n / d))).sum();
    with_genus(mu, nu2, nu3, nu_inf)
}

fn gamma1_pm(n: u64) -> Classical {
    if n <= 4 {
        // ±1 are the only units, so ±Γ₁(N) = Γ₀(N).
        return gamma0(n);
    }
    let ps = prime_factors(n);
    let mu = ps
        .iter()
        .fold(n * n, |acc, &(p, _)| acc / (p * p) * (p * p - 1))
        / 2;
    let nu_inf = divisors_of(n)
        .iter()
        .map(|&d| phi(d) * phi(n / d))
        .sum::<u64>()
        / 2;
    with_genus(mu, 0, 0, nu_inf)
}

fn classical_genus() -> Outcome {
    for n in 1..=60u32 {
        for (name, h, oracle) in [
            ("B0", SubgroupSpec::borel0(n), gamma0(n as u64)),
            ("B±1", SubgroupSpec::borel_pm1(n), gamma1_pm(n as u64)),
        ] {
            let got = match curve_data(&h) {
                Ok(d) => Classical {
                    mu: d.mu,
                    nu2: d.nu2,
                    nu3: d.nu3,
                    nu_inf: d.nu_inf,
                    genus: d.genus,
                },
                Err(e) => return Outcome::Fail(format!("{name}({n}): {e}")),
            };
            if got != oracle {
                return Outcome::Fail(format!("{name}({n}): got {got:?}, want {oracle:?}"));
            }
        }
    }
    Outcome::Pass("B0(N) and B±1(N) for N ≤ 60".into())
}

fn cartan_identity() -> Outcome {
    let mut cases = 0;
    let mut saw_hand_case = false;
    for ell in [5u32, 7, 11] {
        for n in [1u32, 2] {
            let q = ell.pow(n);
            let r = SubgroupSpec::nonsplit_cartan_normalizer(q).unwrap();
            let ctx = GaloisImageContext::new(r, 1).unwrap();
            for delta in unit_subgroups_containing_minus_one(q) {
                let h = SubgroupSpec::borel(q, &delta).unwrap();
                let orbit = points::point_degree(&ctx, &h);
                let formula = points::cartan_degree_formula(ell, n, delta.order());
                match (orbit, formula) {
                    (Ok(a), Ok(b)) if a == b => {
                        saw_hand_case |= (ell, n, delta.order(), a) == (5, 1, 2, 12);
                        cases += 1;
                    }
                    (a, b) => {
                        return Outcome::Fail(format!(
                            "ℓ={ell} n={n} #Δ={}: {a:?} vs {b:?}",
                            delta.order()
                        ))
                    }
                }
            }
        }
    }
    ensure(
        saw_hand_case,
        format!("{cases} (ℓ, n, Δ) cases"),
        "(5, 1, 2) → 12 missing".into(),
    )
}

/// A random structural subgroup at modulus `level`, conjugated by a random
/// element of GL₂.
fn random_structural(rng: &mut StdRng, level: u32) -> SubgroupSpec {
    let (ell, _) = modcurve_core::zmod::prime_power(level).unwrap_or((1, 0));
    let deltas = unit_subgroups_containing_minus_one(level);
    let base = match rng.gen_range(0..5) {
        0 if ell != 2 && level > 1 => SubgroupSpec::nonsplit_cartan_normalizer(level).unwrap(),
        // Conjugation fixes the full group; keep its structural form.
        1 => return SubgroupSpec::full(level),
        2 if level > 1 && level != ell => SubgroupSpec::kernel(level, level / ell).unwrap(),
        _ => SubgroupSpec::borel(level, &deltas[rng.gen_range(0..deltas.len())]).unwrap(),
    };
    let g = random_gl2(rng, level);
    let g_inv = g.inv().unwrap();
    let gens = base
        .gens()
        .iter()
        .map(|x| g_inv.mul(x).unwrap().mul(&g).unwrap())
        .collect();
    SubgroupSpec::generated(level, gens).unwrap()
}

fn random_gl2(rng: &mut StdRng, n: u32) -> Mat2 {
    loop {
        let m = Mat2::new(
            n,
            rng.gen_range(0..n as i64),
            rng.gen_range(0..n as i64),
            rng.gen_range(0..n as i64),
            rng.gen_range(0..n as i64),
        );
        if m.is_invertible() {
            return m;
        }
    }
}

fn level_reduction_suite() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_0006);
    let moduli = [(5u32, 2u32), (3, 3), (2, 5), (7, 2)];
    let mut cases = 0;
    while cases < 240 {
        let (ell, n) = moduli[cases % moduli.len()];
        let q = ell.pow(n);
        let m = rng.gen_range(1..n);
        let j = rng.gen_range(1..=m);
        let r = random_structural(&mut rng, ell.pow(j)).lift(q).unwrap();
        let deltas = unit_subgroups_containing_minus_one(q);
        let h = SubgroupSpec::borel(q, &deltas[rng.gen_range(0..deltas.len())]).unwrap();
        let ctx = GaloisImageContext::new(r, 1).unwrap();
        match points::level_reduction(&ctx, &h, ell.pow(m)) {
            Ok(lr) if lr.hypothesis_holds && lr.equal => cases += 1,
            Ok(lr) => {
                return Outcome::Fail(format!(
                    "q={q}, m={m}: lhs {} rhs {} (hypothesis {})",
                    lr.lhs, lr.rhs, lr.hypothesis_holds
                ))
            }
            Err(e) => return Outcome::Fail(format!("q={q}, m={m}: {e}")),
        }
    }
    Outcome::Pass(format!("{cases} randomized cases at 25, 27, 32, 49"))
}

fn catalog_screen() -> Outcome {
    let Some(path) = std::env::var_os("MODCURVE_CATALOG") else {
        return Outcome::SkippedData("set MODCURVE_CATALOG to the ℓ-adic generator catalog".into());
    };
    let entries = match File::open(&path)
        .map_err(|e| e.to_string())
        .and_then(|f| catalog::parse_catalog(BufReader::new(f)).map_err(|e| e.to_string()))
    {
        Ok(entries) => entries,
        Err(e) => return Outcome::Fail(format!("{}: {e}", path.to_string_lossy())),
    };
    let targets = [(2u32, 5u32), (3, 3), (5, 2)];
    let screened: Vec<(&CatalogEntry, u32)> = entries
        .iter()
        .filter_map(|e| {
            let (p, _) = modcurve_core::zmod::prime_power(e.level)?;
            targets
                .iter()
                .find(|(ell, _)| *ell == p)
                .map(|&(_, n)| (e, n))
        })
        .collect();
    let mut survivors = 0;
    let mut survivors_genus_zero = true;
    for (e, n) in &screened {
        match catalog::screen_entry_range(e, None, *n, *n) {
            Ok(report) => {
                if report.fiber_survivor {
                    survivors += 1;
                    survivors_genus_zero &= report.genus_zero_at_ell;
                }
            }
            Err(err) => return Outcome::Fail(format!("{}: {err}", e.label)),
        }
    }
    let degrees = match catalog::find_entry(&entries, "49.196.9.1").and_then(|e| {
        let r = e.to_subgroup()?;
        let r = if r.modulus() == 49 { r } else { r.lift(49)? };
        let ctx = GaloisImageContext::new(r, 1)?;
        points::fiber_degrees(&ctx, &SubgroupSpec::borel0(49))
    }) {
        Ok(f) => f.degrees,
        Err(e) => return Outcome::Fail(format!("49.196.9.1: {e}")),
    };
    let all_56 = !degrees.is_empty() && degrees.iter().all(|&d| d == 56);
    ensure(
        screened.len() == 132 && survivors == 28 && survivors_genus_zero && all_56,
        format!("{survivors} of 132 survive, all with genus 0 at ℓ; X0(49) fiber {degrees:?}"),
        format!(
            "{} images screened, {survivors} survivors (genus 0 at ℓ: {survivors_genus_zero}); X0(49) fiber {degrees:?}",
            screened.len()
        ),
    )
}

fn random_any(rng: &mut StdRng, q: u32) -> SubgroupSpec {
    let (ell, n) = modcurve_core::zmod::prime_power(q).unwrap();
    let j = rng.gen_range(1..=n);
    random_structural(rng, ell.pow(j)).lift(q).unwrap()
}

fn fiber_partition() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_0008);
    let moduli = [5u32, 7, 8, 9, 11, 13, 16, 25, 27, 32, 49];
    for case in 0..50 {
        let q = moduli[rng.gen_range(0..moduli.len())];
        let r = random_any(&mut rng, q);
        let h = random_any(&mut rng, q);
        let ctx = GaloisImageContext::new(r, 1).unwrap();
        let fiber = match points::fiber_degrees(&ctx, &h) {
            Ok(f) => f,
            Err(e) => return Outcome::Fail(format!("case {case} at {q}: {e}")),
        };
        let index = gl2_order(q) / h.adjoin_minus_i().order().unwrap();
        if fiber.orbit_size_sum() != index || fiber.total_cosets != index {
            return Outcome::Fail(format!(
                "case {case} at {q}: orbit sizes sum to {}, index {index}",
                fiber.orbit_size_sum()
            ));
        }
    }
    Outcome::Pass("50 randomized (R, H) pairs at moduli ≤ 49".into())
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, Check, Duration); 8] = [
        (1, "Table 1 genera", table1, Duration::from_secs(10)),
        (
            2,
            "Table 2 genera and bounds",
            table2,
            Duration::from_secs(300),
        ),
        (
            3,
            "GL2 and Borel order/index formulas, N ≤ 16",
            formulae,
            Duration::from_secs(60),
        ),
        (
            4,
            "classical X0/X1 genus data, N ≤ 60",
            classical_genus,
            Duration::from_secs(120),
        ),
        (
            5,
            "Cartan normalizer degree identity",
            cartan_identity,
            Duration::from_secs(60),
        ),
        (
            6,
            "level-reduction identity",
            level_reduction_suite,
            Duration::from_secs(120),
        ),
        (
            7,
            "catalog screen (132 images, 28 survivors) and X0(49) degree 56",
            catalog_screen,
            Duration::MAX,
        ),
        (
            8,
            "fiber partition invariant",
            fiber_partition,
            Duration::from_secs(60),
        ),
    ];
    let mut failed = false;
    for (id, name, check, budget) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let secs = elapsed.as_secs_f64();
        match outcome {
            Outcome::Pass(detail) if elapsed <= budget => {
                println!("criterion {id} PASS {name} ({secs:.1}s): {detail}")
            }
            Outcome::Pass(detail) => {
                failed = true;
                println!(
                    "criterion {id} FAIL {name} ({secs:.1}s, over {}s budget): {detail}",
                    budget.as_secs()
                )
            }
            Outcome::Fail(detail) => {
                failed = true;
                println!("criterion {id} FAIL {name} ({secs:.1}s): {detail}")
            }
            Outcome::SkippedData(detail) => {
                println!("criterion {id} SKIPPED-DATA {name}: {detail}")
            }
        }
    }
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
