//! Subduction against generator lead terms, and lead-term-monoid series.
//!
//! For a subalgebra given by generators, [`subduct`] repeatedly cancels the
//! lead term of a target by a product of generator lead terms, recording
//! each step; a zero residual certifies membership.  A generator list is a
//! Khovanskii (sagbi) basis exactly when the monoid of lead monomials has
//! the same graded dimensions as the invariant ring, which
//! [`khovanskii_verify`] tests by comparing [`lead_monoid_dimensions`]
//! against the group-action dimensions, alongside subducting the listed
//! generator relations to zero.

use std::collections::HashSet;

use crate::invariants::{khovanskii_generators, Catalog};
use crate::matgroup::{generators, GroupKind};
use crate::ring::{Monomial, MonomialOrder, Polynomial};
use crate::solver::{invariant_series, SolverError};

/// Record of one subduction run: the generator-exponent tuples subtracted
/// (with their coefficients), what is left, and the search effort spent.
#[derive(Debug)]
pub struct SubductionTrace {
    pub steps: Vec<(Vec<u32>, u16)>,
    pub residual: Polynomial,
    pub nodes: u64,
    pub budget_exhausted: bool,
}

impl SubductionTrace {
    /// True when the target was written entirely in the generators.
    pub fn reduced_to_zero(&self) -> bool {
        self.residual.is_zero() && !self.budget_exhausted
    }
}

/// Greedily rewrites `f` modulo the subalgebra generated by `gens`: at each
/// step the lead term is cancelled by a product of generator lead terms,
/// found by depth-first search preferring the largest lead first (ties by
/// list position).  Stops when the residual is zero, no factorization
/// exists, or `node_budget` search nodes are exhausted.
pub fn subduct(
    f: &Polynomial,
    gens: &[(String, Polynomial)],
    order: &MonomialOrder,
    node_budget: u64,
) -> SubductionTrace {
    let spec = f.spec().clone();
    let leads: Vec<(Monomial, u16)> = gens
        .iter()
        .map(|(_, g)| {
            g.lead_term(order)
                .expect("subduction generators must be nonzero")
        })
        .collect();
    let mut pref: Vec<usize> = (0..gens.len()).collect();
    pref.sort_by(|&a, &b| order.cmp(&leads[b].0, &leads[a].0));

    let mut current = f.clone();
    let mut steps = Vec::new();
    let mut nodes = 0u64;
    let mut budget_exhausted = false;
    while !current.is_zero() {
        let (ltm, ltc) = current.lead_term(order).unwrap();
        let Some(tuple) = factor_lead(
            &ltm,
            &leads,
            &pref,
            &mut nodes,
            node_budget,
            &mut budget_exhausted,
        ) else {
            break;
        };
        let mut prod = Polynomial::one(f.frame(), &spec);
        for (i, &e) in tuple.iter().enumerate() {
            if e > 0 {
                prod = prod.mul(&gens[i].1.pow(e));
            }
        }
        let lcp = prod.lead_term(order).unwrap().1;
        let factor = spec.mul_raw(ltc, spec.inv_raw(lcp));
        current = current.sub(&prod.scale_raw(factor));
        steps.push((tuple, factor));
        if steps.len() > 20_000 {
            budget_exhausted = true;
            break;
        }
    }
    SubductionTrace {
        steps,
        residual: current,
        nodes,
        budget_exhausted,
    }
}

/// Nonnegative exponents a_i with prod lead(g_i)^{a_i} equal to `target`,
/// searched over `pref` order, or None.
fn factor_lead(
    target: &Monomial,
    leads: &[(Monomial, u16)],
    pref: &[usize],
    nodes: &mut u64,
    budget: u64,
    exhausted: &mut bool,
) -> Option<Vec<u32>> {
    fn dfs(
        k: usize,
        rem: &mut Vec<u32>,
        tuple: &mut Vec<u32>,
        leads: &[(Monomial, u16)],
        pref: &[usize],
        nodes: &mut u64,
        budget: u64,
        exhausted: &mut bool,
    ) -> bool {
        *nodes += 1;
        if *nodes > budget {
            *exhausted = true;
            return false;
        }
        if rem.iter().all(|&e| e == 0) {
            return true;
        }
        if k == pref.len() {
            return false;
        }
        let gi = pref[k];
        let ge = leads[gi].0.exps();
        let mut amax = u32::MAX;
        for (&r, &g) in rem.iter().zip(ge) {
            if g > 0 {
                amax = amax.min(r / g);
            }
        }
        if amax == u32::MAX {
            amax = 0;
        }
        let saved = rem.clone();
        for a in (0..=amax).rev() {
            for ((r, &s), &g) in rem.iter_mut().zip(&saved).zip(ge) {
                *r = s - a * g;
            }
            tuple[gi] = a;
            if dfs(k + 1, rem, tuple, leads, pref, nodes, budget, exhausted) {
                return true;
            }
            if *exhausted {
                break;
            }
        }
        rem.copy_from_slice(&saved);
        tuple[gi] = 0;
        false
    }
    let mut rem = target.exps().to_vec();
    let mut tuple = vec![0u32; leads.len()];
    if dfs(0, &mut rem, &mut tuple, leads, pref, nodes, budget, exhausted) {
        Some(tuple)
    } else {
        None
    }
}

/// Graded sizes of the multiplicative monoid generated by the generator
/// lead monomials, for degrees 0..=max_degree.
pub fn lead_monoid_dimensions(
    gens: &[(String, Polynomial)],
    order: &MonomialOrder,
    max_degree: u64,
) -> Vec<usize> {
    assert!(!gens.is_empty());
    let frame = gens[0].1.frame().clone();
    assert!(
        max_degree <= frame.max_exponent() as u64,
        "degree bound exceeds the packed exponent capacity"
    );
    let mut leads: Vec<(u64, u64)> = gens
        .iter()
        .map(|(_, g)| {
            let (m, _) = g.lead_term(order).expect("nonzero generators");
            assert!(m.deg() > 0, "constant generator lead");
            (frame.pack_slice(m.exps()), m.deg())
        })
        .collect();
    leads.sort_unstable();
    leads.dedup();
    let nd = max_degree as usize + 1;
    let mut reach: Vec<HashSet<u64>> = vec![HashSet::new(); nd];
    reach[0].insert(0u64);
    for d in 0..nd {
        let here: Vec<u64> = reach[d].iter().copied().collect();
        for k in here {
            for &(lk, ld) in &leads {
                let t = d as u64 + ld;
                if t < nd as u64 {
                    // Exponents stay below the field capacity because the
                    // total degree is bounded, so key addition is product.
                    reach[t as usize].insert(k + lk);
                }
            }
        }
    }
    reach.iter().map(|s| s.len()).collect()
}

// ---------------------------------------------------------------------------
// Catalogued generator relations.
// ---------------------------------------------------------------------------

/// A relation between two power products of catalogued generators that
/// share the same lead monomial; the difference drops to lower order.
#[derive(Debug, Clone)]
pub struct Tete {
    pub name: String,
    pub degree: u64,
    /// (generator index, exponent) pairs of each side.
    pub lhs: Vec<(usize, u32)>,
    pub rhs: Vec<(usize, u32)>,
}

fn power_product(gens: &[(String, Polynomial)], parts: &[(usize, u32)]) -> Polynomial {
    let base = &gens[0].1;
    let mut out = Polynomial::one(base.frame(), base.spec());
    for &(i, e) in parts {
        if e > 0 {
            out = out.mul(&gens[i].1.pow(e));
        }
    }
    out
}

/// The polynomial lhs - rhs of a relation, built from the generator list.
pub fn tete_difference(gens: &[(String, Polynomial)], tete: &Tete) -> Polynomial {
    power_product(gens, &tete.lhs).sub(&power_product(gens, &tete.rhs))
}

fn render_parts(gens: &[(String, Polynomial)], parts: &[(usize, u32)]) -> String {
    let factors: Vec<String> = parts
        .iter()
        .filter(|&&(_, e)| e > 0)
        .map(|&(i, e)| {
            if e == 1 {
                gens[i].0.clone()
            } else {
                format!("{}^{}", gens[i].0, e)
            }
        })
        .collect();
    factors.join("*")
}

/// The catalogued relations for one subgroup's generator list, in the same
/// indexing as [`khovanskii_generators`].
pub fn tete_a_tetes(cat: &Catalog, kind: GroupKind) -> Vec<Tete> {
    let gens = khovanskii_generators(cat, kind);
    let idx = |label: &str| -> usize {
        gens.iter()
            .position(|(l, _)| l == label)
            .unwrap_or_else(|| panic!("generator {label} missing"))
    };
    let part_deg = |parts: &[(usize, u32)]| -> u64 {
        parts
            .iter()
            .map(|&(i, e)| e as u64 * gens[i].1.homogeneous_degree().unwrap())
            .sum()
    };
    let q = cat.q() as u32;
    let m = cat.m();
    let n = 2 * m;
    let mut out = Vec::new();
    let mut push = |lhs: Vec<(usize, u32)>, rhs: Vec<(usize, u32)>| {
        let dl = part_deg(&lhs);
        debug_assert_eq!(dl, part_deg(&rhs), "relation sides must share a degree");
        let name = format!("{} - {}", render_parts(&gens, &lhs), render_parts(&gens, &rhs));
        out.push(Tete {
            name,
            degree: dl,
            lhs,
            rhs,
        });
    };
    match kind {
        GroupKind::Sylow => {
            for j in 0..m {
                if n < 3 + 2 * j {
                    break;
                }
                let top = n - 3 - 2 * j;
                let level = |i: u32| -> usize {
                    if j == 0 {
                        idx(&format!("xi{i}"))
                    } else {
                        idx(&format!("psi{j}_xi{i}"))
                    }
                };
                let nx = idx(&format!("Nx{}", j + 1));
                let ny = idx(&format!("Ny{}", j + 1));
                for i in 0..top {
                    push(vec![(level(i), q)], vec![(level(i + 1), 1), (nx, q - 1)]);
                }
                push(vec![(level(top), q)], vec![(ny, 1), (nx, q)]);
            }
        }
        GroupKind::Hook => {
            if n >= 3 {
                let x1 = idx("x1");
                let ny1 = idx("Ny1");
                for j in 0..n - 3 {
                    push(
                        vec![(idx(&format!("xi{j}")), q)],
                        vec![(idx(&format!("xi{}", j + 1)), 1), (x1, q - 1)],
                    );
                }
                push(vec![(idx(&format!("xi{}", n - 3)), q)], vec![(ny1, 1), (x1, q)]);
            }
        }
        GroupKind::Borel => {
            for i in 1..=m {
                let a = idx(&format!("Ny{i}^{}", q - 1));
                let b = idx(&format!("Nx{i}^{}", q - 1));
                let c = idx(&format!("Ny{i}Nx{i}"));
                push(vec![(a, 1), (b, 1)], vec![(c, q - 1)]);
            }
            if n >= 3 {
                let b1 = idx(&format!("Nx1^{}", q - 1));
                let c1 = idx("Ny1Nx1");
                for j in 0..n - 3 {
                    push(
                        vec![(idx(&format!("xi{j}")), q)],
                        vec![(idx(&format!("xi{}", j + 1)), 1), (b1, 1)],
                    );
                }
                push(vec![(idx(&format!("xi{}", n - 3)), q)], vec![(c1, 1), (b1, 1)]);
            }
        }
        _ => panic!("no relation list is catalogued for {kind:?}"),
    }
    out
}

// ---------------------------------------------------------------------------
// The combined verification.
// ---------------------------------------------------------------------------

/// Everything `khovanskii_verify` measured, for reporting.
#[derive(Debug)]
pub struct KhovanskiiOutcome {
    pub group: String,
    pub max_degree: u64,
    pub generator_labels: Vec<String>,
    /// Relation name -> whether its difference subduced to zero.
    pub subductions: Vec<(String, bool)>,
    /// Relations above the degree bound, left unchecked.
    pub skipped: Vec<String>,
    pub monoid_dims: Vec<usize>,
    pub invariant_dims: Vec<usize>,
}

impl KhovanskiiOutcome {
    pub fn dims_match(&self) -> bool {
        self.monoid_dims == self.invariant_dims
    }

    pub fn passed(&self) -> bool {
        self.dims_match() && self.subductions.iter().all(|(_, ok)| *ok)
    }
}

/// Tests the catalogued generator list for `kind` as a Khovanskii basis up
/// to `max_degree`: every catalogued relation of degree within the bound
/// must subduct to zero, and the lead-monomial monoid must have the same
/// graded sizes as the invariant ring computed from the group action.
pub fn khovanskii_verify(
    cat: &Catalog,
    kind: GroupKind,
    max_degree: u64,
    node_budget: u64,
) -> Result<KhovanskiiOutcome, SolverError> {
    let gens = khovanskii_generators(cat, kind);
    let order = MonomialOrder::Lex;
    let mut subductions = Vec::new();
    let mut skipped = Vec::new();
    for tete in tete_a_tetes(cat, kind) {
        if tete.degree > max_degree {
            skipped.push(tete.name);
            continue;
        }
        let diff = tete_difference(&gens, &tete);
        let ok = diff.is_zero() || subduct(&diff, &gens, &order, node_budget).reduced_to_zero();
        subductions.push((tete.name, ok));
    }
    let monoid_dims = lead_monoid_dimensions(&gens, &order, max_degree);
    let group_gens = generators(kind, cat.frame(), cat.spec());
    let invariant_dims = invariant_series(cat.frame(), cat.spec(), &group_gens, max_degree)?;
    Ok(KhovanskiiOutcome {
        group: format!("{kind:?}"),
        max_degree,
        generator_labels: gens.into_iter().map(|(l, _)| l).collect(),
        subductions,
        skipped,
        monoid_dims,
        invariant_dims,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldSpec;
    use crate::invariants::catalog;
    use crate::ring::VarFrame;
    use proptest::prelude::*;

    #[test]
    fn subduction_cancels_an_explicit_combination() {
        let cat = catalog(3, 2);
        let gens: Vec<(String, Polynomial)> = (0..=1u32)
            .map(|i| (format!("xi{i}"), cat.xi(i).clone()))
            .collect();
        let f = cat.xi(0).mul(cat.xi(1)).add(&cat.xi(1).pow(2));
        let trace = subduct(&f, &gens, &MonomialOrder::Lex, 10_000);
        assert!(trace.reduced_to_zero());
        assert_eq!(trace.steps.len(), 2);
    }

    #[test]
    fn subduction_reports_a_stuck_residual() {
        let frame = VarFrame::new(1);
        let spec = FieldSpec::prime(3).unwrap();
        let y = Polynomial::var(&frame, &spec, 0);
        let xi0 = crate::invariants::xi_poly(&frame, &spec, 0);
        let trace = subduct(&y, &[("xi0".into(), xi0)], &MonomialOrder::Lex, 10_000);
        assert!(!trace.reduced_to_zero());
        assert_eq!(trace.residual, y);
        assert!(trace.steps.is_empty());
    }

    #[test]
    fn monoid_dimensions_for_one_quadratic_lead() {
        let frame = VarFrame::new(1);
        let spec = FieldSpec::prime(3).unwrap();
        let xi0 = crate::invariants::xi_poly(&frame, &spec, 0);
        let dims = lead_monoid_dimensions(&[("xi0".into(), xi0)], &MonomialOrder::Lex, 8);
        assert_eq!(dims, vec![1, 0, 1, 0, 1, 0, 1, 0, 1]);
    }

    #[test]
    fn sylow_relations_subduce_to_zero_at_two_pairs() {
        let cat = catalog(3, 2);
        let gens = khovanskii_generators(&cat, GroupKind::Sylow);
        let tetes = tete_a_tetes(&cat, GroupKind::Sylow);
        let names: Vec<&str> = tetes.iter().map(|t| t.name.as_str()).collect();
        assert_eq!(names, vec!["xi0^3 - xi1*Nx1^2", "xi1^3 - Ny1*Nx1^3"]);
        for tete in &tetes {
            let diff = tete_difference(&gens, tete);
            assert!(!diff.is_zero(), "{} is a nontrivial relation", tete.name);
            let trace = subduct(&diff, &gens, &MonomialOrder::Lex, 10_000);
            assert!(trace.reduced_to_zero(), "{} fails to subduct", tete.name);
        }
    }

    #[test]
    fn hook_relations_subduce_to_zero_at_two_pairs() {
        let cat = catalog(3, 2);
        let gens = khovanskii_generators(&cat, GroupKind::Hook);
        let tetes = tete_a_tetes(&cat, GroupKind::Hook);
        let names: Vec<&str> = tetes.iter().map(|t| t.name.as_str()).collect();
        assert_eq!(names, vec!["xi0^3 - xi1*x1^2", "xi1^3 - Ny1*x1^3"]);
        for tete in &tetes {
            let diff = tete_difference(&gens, tete);
            let trace = subduct(&diff, &gens, &MonomialOrder::Lex, 10_000);
            assert!(trace.reduced_to_zero(), "{} fails to subduct", tete.name);
        }
    }

    #[test]
    fn borel_relations_count_and_reduce() {
        let cat = catalog(3, 2);
        let gens = khovanskii_generators(&cat, GroupKind::Borel);
        let tetes = tete_a_tetes(&cat, GroupKind::Borel);
        assert_eq!(tetes.len(), 4);
        for tete in &tetes {
            let diff = tete_difference(&gens, tete);
            let ok = diff.is_zero()
                || subduct(&diff, &gens, &MonomialOrder::Lex, 10_000).reduced_to_zero();
            assert!(ok, "{} fails to reduce", tete.name);
        }
    }

    #[test]
    fn sylow_verification_passes_at_two_pairs() {
        let cat = catalog(3, 2);
        let outcome = khovanskii_verify(&cat, GroupKind::Sylow, 12, 10_000).unwrap();
        assert!(outcome.skipped.is_empty());
        assert_eq!(outcome.subductions.len(), 2);
        assert!(outcome.passed(), "dims {:?} vs {:?}", outcome.monoid_dims, outcome.invariant_dims);
    }

    #[test]
    fn trivial_group_monoid_is_the_full_ring() {
        let cat = catalog(3, 1);
        let outcome = khovanskii_verify(&cat, GroupKind::Sylow, 6, 10_000).unwrap();
        assert!(outcome.subductions.is_empty());
        assert_eq!(outcome.monoid_dims, vec![1, 2, 3, 4, 5, 6, 7]);
        assert!(outcome.passed());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn products_of_generators_always_subduct_to_zero(
            a0 in 0u32..4,
            a1 in 0u32..4,
            b0 in 0u32..4,
            b1 in 0u32..4,
            c in 1i64..3,
        ) {
            prop_assume!(a0 + a1 > 0 || b0 + b1 > 0);
            let cat = catalog(3, 2);
            let gens: Vec<(String, Polynomial)> = (0..=1u32)
                .map(|i| (format!("xi{i}"), cat.xi(i).clone()))
                .collect();
            let f = cat.xi(0).pow(a0).mul(&cat.xi(1).pow(a1))
                .add(&cat.xi(0).pow(b0).mul(&cat.xi(1).pow(b1)).scale(c));
            if !f.is_zero() {
                let trace = subduct(&f, &gens, &MonomialOrder::Lex, 100_000);
                prop_assert!(trace.reduced_to_zero());
            }
        }
    }
}
