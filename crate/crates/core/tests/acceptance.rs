//! End-to-end acceptance runs.
//!
//! Each test drives one published criterion through the check registry and
//! prints a one-line verdict (visible with `--nocapture`).  Heavy-tier
//! instances join in when the `ORTHO_HEAVY` environment variable is set;
//! without it the default-tier instances alone must carry each criterion.

use ortho_invar::invariants::catalog;
use ortho_invar::ring::Polynomial;
use ortho_invar::solver::express;
use ortho_invar::verifier::{registry, run_check, CheckReport, CheckStatus};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn heavy_enabled() -> bool {
    std::env::var_os("ORTHO_HEAVY").is_some()
}

fn run_names(names: &[&str]) -> Vec<CheckReport> {
    let mut reports = Vec::new();
    for def in registry() {
        if !names.contains(&def.name) {
            continue;
        }
        for inst in &def.instances {
            if inst.heavy && !heavy_enabled() {
                continue;
            }
            reports.push(run_check(&def, inst));
        }
    }
    reports
}

struct Outcome {
    passed: usize,
    skipped: usize,
    failed: Vec<CheckReport>,
    wall_ms: u128,
}

fn tally(reports: Vec<CheckReport>) -> Outcome {
    let mut out = Outcome {
        passed: 0,
        skipped: 0,
        failed: Vec::new(),
        wall_ms: 0,
    };
    for r in reports {
        out.wall_ms += r.wall_ms;
        match r.status {
            CheckStatus::Pass => out.passed += 1,
            CheckStatus::Skip => out.skipped += 1,
            CheckStatus::Fail => out.failed.push(r),
        }
    }
    out
}

fn report(tag: &str, o: &Outcome) {
    let verdict = if !o.failed.is_empty() { "FAIL" } else { "PASS" };
    println!(
        "criterion {tag}: {verdict} ({} passed, {} failed, {} skipped, {} ms)",
        o.passed,
        o.failed.len(),
        o.skipped,
        o.wall_ms
    );
    for r in &o.failed {
        let w: String = r.witness.chars().take(300).collect();
        println!("    {} {} -- {w}", r.name, r.params);
    }
}

fn criterion(tag: &str, names: &[&str], budget_ms: Option<u128>) {
    let o = tally(run_names(names));
    report(tag, &o);
    assert!(
        o.failed.is_empty(),
        "criterion {tag}: {} failing instances",
        o.failed.len()
    );
    assert!(o.passed > 0, "criterion {tag}: nothing ran to a pass");
    if let Some(b) = budget_ms {
        assert!(
            o.wall_ms <= b,
            "criterion {tag}: wall {} ms over the {} ms budget",
            o.wall_ms,
            b
        );
    }
}

#[test]
fn criterion_01_group_orders() {
    criterion("01 group orders", &["group_orders"], Some(30_000));
}

#[test]
fn criterion_02_form_invariance() {
    criterion("02 form invariance", &["xi_invariance"], Some(10_000));
}

#[test]
fn criterion_03_norm_product_and_catalan() {
    criterion("03 norm product and Catalan congruence", &["m2_c22"], Some(60_000));
}

#[test]
fn criterion_04_twist_annihilation() {
    criterion("04 twist annihilates the orbit product", &["minpoly"], Some(60_000));
}

#[test]
fn criterion_05_lex_lead_terms() {
    criterion("05 lex lead terms", &["lex_lt"], None);
}

#[test]
fn criterion_06_parameter_system() {
    criterion(
        "06 parameter system and Dickson reduction",
        &["hsop_variety", "dickson_reduction"],
        Some(60_000),
    );
}

#[test]
fn criterion_07_zero_locus() {
    criterion("07 zero locus of the first two forms", &["variety_xi"], Some(60_000));
}

#[test]
fn criterion_08_hook_relations() {
    criterion(
        "08 hook relations and memberships",
        &["hook_power_relations", "hook_compliance", "hook_ring"],
        Some(60_000),
    );
}

#[test]
fn criterion_09_sylow_bases() {
    // The rank-three instances carry their own, larger budget.
    let names = [
        "sylow_khovanskii",
        "sylow_block",
        "sylow_rank",
        "sylow_generation",
    ];
    let (high, low): (Vec<_>, Vec<_>) = run_names(&names)
        .into_iter()
        .partition(|r| r.params.contains("m=3"));
    let lo = tally(low);
    let hi = tally(high);
    report("09 Sylow bases (rank two)", &lo);
    report("09 Sylow bases (rank three)", &hi);
    assert!(lo.failed.is_empty() && hi.failed.is_empty(), "criterion 09: failing instances");
    assert!(lo.passed > 0 && hi.passed > 0, "criterion 09: nothing ran to a pass");
    assert!(lo.wall_ms <= 180_000, "criterion 09: rank-two wall {} ms over budget", lo.wall_ms);
    assert!(hi.wall_ms <= 1_800_000, "criterion 09: rank-three wall {} ms over budget", hi.wall_ms);
}

#[test]
fn criterion_10_minimal_generation() {
    criterion(
        "10 minimal generation certificates",
        &["minimal_generation", "sylow_minimal"],
        Some(300_000),
    );
}

#[test]
fn criterion_11_borel_series() {
    criterion("11 Borel invariance and series", &["borel_ring"], Some(180_000));
}

#[test]
fn criterion_12_reynolds_images() {
    criterion("12 Reynolds images", &["reynolds_lt", "reynolds_d1"], Some(120_000));
}

#[test]
fn criterion_13_rank_two_suite() {
    criterion(
        "13 rank-two identity suite",
        &[
            "norm_recursion",
            "norm_lead_valuations",
            "corrector_membership",
            "gamma_valuation",
            "quotient_series",
            "m2_c22_steenrod",
            "m2_u2d",
            "m2_u2_st",
            "m2_u2d_st",
            "m2_c32",
            "gamma_division",
            "minor_nu",
            "nu_props",
            "phibar_kernel_div",
        ],
        Some(600_000),
    );
}

#[test]
fn criterion_14_steenrod_generation() {
    criterion("14 Steenrod closure generation", &["steenrod_generation"], Some(300_000));
}

/// Draw a polynomial with a bounded number of random terms.
fn random_poly(
    frame: &ortho_invar::ring::VarFrame,
    spec: &ortho_invar::gf::FieldSpec,
    rng: &mut StdRng,
) -> Polynomial {
    let mut f = Polynomial::zero(frame, spec);
    for _ in 0..rng.gen_range(1..=4u32) {
        let mut t = Polynomial::constant(frame, spec, rng.gen_range(1..spec.p() as i64));
        for pos in 0..frame.len() {
            let e = rng.gen_range(0..=2u32);
            if e > 0 {
                t = t.mul(&Polynomial::var(frame, spec, pos).pow(e));
            }
        }
        f = f.add(&t);
    }
    f
}

#[test]
fn criterion_15_property_suites() {
    let start = std::time::Instant::now();
    let o = tally(run_names(&[
        "steenrod_cartan",
        "steenrod_adem",
        "steenrod_stability",
        "steenrod_equivariance",
        "xi_series_slots",
        "top_slot_products",
        "psij_lt",
        "phi_psi_commute",
    ]));
    report("15 operation properties", &o);
    assert!(o.failed.is_empty(), "criterion 15: failing instances");
    assert!(o.passed > 0, "criterion 15: nothing ran to a pass");

    // Ring axioms on random triples.
    let cat = catalog(3, 2);
    let (frame, spec) = (cat.frame(), cat.spec());
    let mut rng = StdRng::seed_from_u64(0x0AC5);
    for case in 0..500 {
        let f = random_poly(frame, spec, &mut rng);
        let g = random_poly(frame, spec, &mut rng);
        let h = random_poly(frame, spec, &mut rng);
        assert!(f.add(&g) == g.add(&f), "ring case {case}: addition commutes");
        assert!(
            f.add(&g).add(&h) == f.add(&g.add(&h)),
            "ring case {case}: addition associates"
        );
        assert!(f.mul(&g) == g.mul(&f), "ring case {case}: multiplication commutes");
        assert!(
            f.mul(&g).mul(&h) == f.mul(&g.mul(&h)),
            "ring case {case}: multiplication associates"
        );
        assert!(
            f.mul(&g.add(&h)) == f.mul(&g).add(&f.mul(&h)),
            "ring case {case}: distributivity"
        );
        assert!(f.sub(&f).is_zero(), "ring case {case}: subtraction cancels");
    }
    println!("criterion 15: PASS (500 ring-axiom cases)");

    // Solver soundness: random homogeneous combinations of the first two
    // forms must be recovered exactly, and a spoiled target must be refused.
    let gens: Vec<(String, Polynomial)> = (0..=1)
        .map(|i| (format!("xi{i}"), cat.xi(i).clone()))
        .collect();
    let y1 = Polynomial::var(frame, spec, frame.pos_y(1));
    for case in 0..500 {
        let total = 2 * rng.gen_range(1..=7u32);
        let pairs: Vec<(u32, u32)> = (0..=total / 2)
            .filter_map(|a0| {
                let rest = total - 2 * a0;
                (rest % 4 == 0).then_some((a0, rest / 4))
            })
            .collect();
        let mut target = Polynomial::zero(frame, spec);
        let mut any = false;
        for &(a0, a1) in &pairs {
            let c = rng.gen_range(0..3i64);
            if c == 0 {
                continue;
            }
            any = true;
            target = target.add(
                &cat.xi(0)
                    .pow(a0)
                    .mul(&cat.xi(1).pow(a1))
                    .scale(c),
            );
        }
        if !any || target.is_zero() {
            continue;
        }
        let out = express(&target, &gens, None).expect("solve stays in budget");
        let sol = out
            .solution
            .unwrap_or_else(|| panic!("express case {case}: combination must be found"));
        let mut rebuilt = Polynomial::zero(frame, spec);
        for (exps, c) in &sol {
            rebuilt = rebuilt.add(
                &cat.xi(0)
                    .pow(exps[0])
                    .mul(&cat.xi(1).pow(exps[1]))
                    .scale(*c as i64),
            );
        }
        assert!(rebuilt == target, "express case {case}: rebuilt combination differs");
        let spoiled = target.add(&y1.pow(total));
        let refused = express(&spoiled, &gens, None).expect("solve stays in budget");
        assert!(
            refused.solution.is_none(),
            "express case {case}: a non-member was accepted"
        );
    }
    println!("criterion 15: PASS (500 solver-soundness cases with refusals)");
    let wall = start.elapsed().as_millis();
    println!("criterion 15 total wall: {wall} ms");
    assert!(wall <= 180_000, "criterion 15: wall {wall} ms over the 180000 ms budget");
}
