//! Matrix groups acting on the hyperbolic frame.
//!
//! Elements are n x n matrices over GF(q) stored row-major; row i is the image
//! of the frame variable at position i, so acting on a polynomial substitutes
//! row i for variable i and composition of actions is plain matrix
//! multiplication.  Points of the underlying space transform as column
//! vectors by left multiplication with the same matrix.
//!
//! Generator sets are available for the full orthogonal group of plus type
//! (`OPlus`), its Borel subgroup (Sylow + torus), the Sylow p-subgroup built
//! from hook generators at every nesting level, the hook subgroup itself, the
//! maximal torus, the Weyl generators, and the stabilizer of the smallest
//! frame variable.  On top of the generators: BFS closure with a hard element
//! cap, orbits of linear forms, orbit products (norms), and the transfer-style
//! averaging operator over Borel cosets.

use crate::gf::FieldSpec;
use crate::ring::{Polynomial, VarFrame};
use std::collections::{HashSet, VecDeque};
use thiserror::Error;

/// Hard cap on closure size: desk-scale groups stay far below this.
pub const CLOSURE_CAP: usize = 10_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("closure exceeded the cap of {0} elements")]
    ClosureCap(usize),
}

/// Which generator set to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    /// Full orthogonal group of plus type O^+(2m, q).
    OPlus,
    /// Borel subgroup: Sylow p-subgroup extended by the torus.
    Borel,
    /// Sylow p-subgroup P_m (hook generators at every nesting level).
    Sylow,
    /// Hook subgroup H fixing x_1 (outermost nesting level only).
    Hook,
    /// Maximal torus: diagonal scalings of the hyperbolic pairs.
    Torus,
    /// Weyl generators: pair swaps and the y_m <-> x_m flip.
    Weyl,
    /// Stabilizer of x_1 in the full group.
    StabilizerX1,
}

/// A group element: an n x n matrix over GF(q), rows = variable images.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElem {
    n: usize,
    mat: Vec<u16>,
}

impl GroupElem {
    pub fn identity(n: usize) -> GroupElem {
        let mut mat = vec![0u16; n * n];
        for i in 0..n {
            mat[i * n + i] = 1;
        }
        GroupElem { n, mat }
    }

    pub fn from_rows(rows: &[Vec<u16>]) -> GroupElem {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n));
        GroupElem {
            n,
            mat: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, r: usize, c: usize) -> u16 {
        self.mat[r * self.n + c]
    }

    fn set(&mut self, r: usize, c: usize, v: u16) {
        self.mat[r * self.n + c] = v;
    }

    pub fn mul(&self, other: &GroupElem, spec: &FieldSpec) -> GroupElem {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = GroupElem {
            n,
            mat: vec![0; n * n],
        };
        for r in 0..n {
            for k in 0..n {
                let a = self.mat[r * n + k];
                if a == 0 {
                    continue;
                }
                for c in 0..n {
                    let b = other.mat[k * n + c];
                    if b == 0 {
                        continue;
                    }
                    let cur = out.mat[r * n + c];
                    out.mat[r * n + c] = spec.add_raw(cur, spec.mul_raw(a, b));
                }
            }
        }
        out
    }

    /// Inverse by Gauss-Jordan elimination; panics if singular (group
    /// elements are invertible by construction).
    pub fn inverse(&self, spec: &FieldSpec) -> GroupElem {
        let n = self.n;
        let mut a = self.mat.clone();
        let mut b = GroupElem::identity(n).mat;
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| a[r * n + col] != 0)
                .expect("singular matrix in a group");
            for j in 0..n {
                a.swap(col * n + j, pivot * n + j);
                b.swap(col * n + j, pivot * n + j);
            }
            let inv = spec.inv_raw(a[col * n + col]);
            for j in 0..n {
                a[col * n + j] = spec.mul_raw(a[col * n + j], inv);
                b[col * n + j] = spec.mul_raw(b[col * n + j], inv);
            }
            for r in 0..n {
                if r != col && a[r * n + col] != 0 {
                    let f = a[r * n + col];
                    for j in 0..n {
                        let s = spec.mul_raw(f, a[col * n + j]);
                        a[r * n + j] = spec.sub_raw(a[r * n + j], s);
                        let s = spec.mul_raw(f, b[col * n + j]);
                        b[r * n + j] = spec.sub_raw(b[r * n + j], s);
                    }
                }
            }
        }
        GroupElem { n, mat: b }
    }

    /// Applies the element to a row vector (a linear form's coefficients).
    pub fn apply_row(&self, v: &[u16], spec: &FieldSpec) -> Vec<u16> {
        let n = self.n;
        assert_eq!(v.len(), n);
        let mut out = vec![0u16; n];
        for (i, &vi) in v.iter().enumerate() {
            if vi == 0 {
                continue;
            }
            for (c, o) in out.iter_mut().enumerate() {
                *o = spec.add_raw(*o, spec.mul_raw(vi, self.mat[i * n + c]));
            }
        }
        out
    }

    /// Applies the element to a point (column vector), g . v.
    pub fn apply_point(&self, v: &[u16], spec: &FieldSpec) -> Vec<u16> {
        let n = self.n;
        assert_eq!(v.len(), n);
        let mut out = vec![0u16; n];
        for (r, o) in out.iter_mut().enumerate() {
            for (c, &vc) in v.iter().enumerate() {
                if vc != 0 {
                    *o = spec.add_raw(*o, spec.mul_raw(self.mat[r * n + c], vc));
                }
            }
        }
        out
    }
}

/// One hook generator at nesting `level`, coupling pair `i` (> level).
/// Kind 'a': y_level += a*x_i, y_i -= a*x_level.
/// Kind 'b': y_level += b*y_i, x_i -= b*x_level.
/// Both fix x_level and everything outside the two pairs, and preserve the
/// quadratic form.
fn hook_elem(frame: &VarFrame, spec: &FieldSpec, level: u32, i: u32, kind_a: bool, par: u16) -> GroupElem {
    let n = frame.n() as usize;
    let mut g = GroupElem::identity(n);
    let (yl, xl) = (frame.pos_y(level), frame.pos_x(level));
    let (yi, xi) = (frame.pos_y(i), frame.pos_x(i));
    if kind_a {
        g.set(yl, xi, spec.add_raw(g.entry(yl, xi), par));
        g.set(yi, xl, spec.sub_raw(g.entry(yi, xl), par));
    } else {
        g.set(yl, yi, spec.add_raw(g.entry(yl, yi), par));
        g.set(xi, xl, spec.sub_raw(g.entry(xi, xl), par));
    }
    g
}

/// Swap of the hyperbolic pairs i and i+1.
fn pair_swap(frame: &VarFrame, i: u32) -> GroupElem {
    let n = frame.n() as usize;
    let mut g = GroupElem::identity(n);
    let (a, b) = (frame.pos_y(i), frame.pos_y(i + 1));
    let (c, d) = (frame.pos_x(i), frame.pos_x(i + 1));
    g.set(a, a, 0);
    g.set(b, b, 0);
    g.set(a, b, 1);
    g.set(b, a, 1);
    g.set(c, c, 0);
    g.set(d, d, 0);
    g.set(c, d, 1);
    g.set(d, c, 1);
    g
}

/// The flip y_m <-> x_m on the innermost pair.
fn innermost_flip(frame: &VarFrame) -> GroupElem {
    let n = frame.n() as usize;
    let m = frame.m();
    let mut g = GroupElem::identity(n);
    let (ym, xm) = (frame.pos_y(m), frame.pos_x(m));
    g.set(ym, ym, 0);
    g.set(xm, xm, 0);
    g.set(ym, xm, 1);
    g.set(xm, ym, 1);
    g
}

/// Torus generator scaling pair i by the primitive root: y_i -> t y_i,
/// x_i -> t^{-1} x_i.
fn torus_elem(frame: &VarFrame, spec: &FieldSpec, i: u32) -> GroupElem {
    let n = frame.n() as usize;
    let mut g = GroupElem::identity(n);
    let t = spec.primitive_root_raw();
    g.set(frame.pos_y(i), frame.pos_y(i), t);
    g.set(frame.pos_x(i), frame.pos_x(i), spec.inv_raw(t));
    g
}

/// Hook generators for the pair at `level` against all inner pairs.  One
/// generator per GF(p)-basis scalar of the parameter space, so the closure is
/// the full one-parameter group even over extensions.
fn hook_generators_at_level(frame: &VarFrame, spec: &FieldSpec, level: u32) -> Vec<GroupElem> {
    let mut gens = Vec::new();
    let params: Vec<u16> = if spec.k() == 1 {
        vec![1]
    } else {
        // Basis 1, t of GF(p^2) over GF(p).
        vec![1, spec.raw_from_coords(0, 1)]
    };
    for i in level + 1..=frame.m() {
        for &par in &params {
            gens.push(hook_elem(frame, spec, level, i, true, par));
            gens.push(hook_elem(frame, spec, level, i, false, par));
        }
    }
    gens
}

/// Generator matrices for the requested subgroup at (m, q).
pub fn generators(kind: GroupKind, frame: &VarFrame, spec: &FieldSpec) -> Vec<GroupElem> {
    let m = frame.m();
    match kind {
        GroupKind::Hook => hook_generators_at_level(frame, spec, 1),
        GroupKind::Sylow => (1..m)
            .flat_map(|level| hook_generators_at_level(frame, spec, level))
            .collect(),
        GroupKind::Torus => (1..=m).map(|i| torus_elem(frame, spec, i)).collect(),
        GroupKind::Weyl => {
            let mut gens: Vec<GroupElem> = (1..m).map(|i| pair_swap(frame, i)).collect();
            gens.push(innermost_flip(frame));
            gens
        }
        GroupKind::Borel => {
            let mut gens = generators(GroupKind::Sylow, frame, spec);
            gens.extend(generators(GroupKind::Torus, frame, spec));
            gens
        }
        GroupKind::OPlus => {
            let mut gens = generators(GroupKind::Borel, frame, spec);
            gens.extend(generators(GroupKind::Weyl, frame, spec));
            gens
        }
        GroupKind::StabilizerX1 => {
            // The stabilizer of x_1 is generated by the hook subgroup together
            // with the full orthogonal group of the inner pairs 2..m.
            let mut gens = generators(GroupKind::Hook, frame, spec);
            if m >= 2 {
                gens.extend((2..m).map(|i| pair_swap(frame, i)));
                gens.push(innermost_flip(frame));
                gens.extend((2..=m).map(|i| torus_elem(frame, spec, i)));
                gens.extend(
                    (2..m).flat_map(|level| hook_generators_at_level(frame, spec, level)),
                );
            }
            gens
        }
    }
}

/// The expected order of the closure for the kinds with a closed formula.
pub fn expected_order(kind: GroupKind, m: u32, q: u64) -> Option<u64> {
    match kind {
        GroupKind::OPlus => {
            // 2 q^{m(m-1)} (q^m - 1) prod_{i=1}^{m-1} (q^{2i} - 1)
            let mut ord = 2 * q.pow(m * (m - 1)) * (q.pow(m) - 1);
            for i in 1..m {
                ord *= q.pow(2 * i) - 1;
            }
            Some(ord)
        }
        GroupKind::Sylow => Some(q.pow(m * (m - 1))),
        GroupKind::Hook => Some(q.pow(2 * m - 2)),
        GroupKind::Borel => Some(q.pow(m * (m - 1)) * (q - 1).pow(m)),
        GroupKind::Torus => Some((q - 1).pow(m)),
        _ => None,
    }
}

/// BFS closure of a generator set.  Errors when the cap is exceeded.
pub fn closure(gens: &[GroupElem], spec: &FieldSpec) -> Result<Vec<GroupElem>, GroupError> {
    let n = gens.first().map(|g| g.n()).unwrap_or(0);
    let id = GroupElem::identity(n);
    let mut seen: HashSet<GroupElem> = HashSet::new();
    let mut order: Vec<GroupElem> = Vec::new();
    let mut queue: VecDeque<GroupElem> = VecDeque::new();
    seen.insert(id.clone());
    order.push(id.clone());
    queue.push_back(id);
    while let Some(g) = queue.pop_front() {
        for h in gens {
            let gh = g.mul(h, spec);
            if seen.insert(gh.clone()) {
                if seen.len() > CLOSURE_CAP {
                    return Err(GroupError::ClosureCap(CLOSURE_CAP));
                }
                order.push(gh.clone());
                queue.push_back(gh);
            }
        }
    }
    Ok(order)
}

/// Acts on a polynomial: variable at position i is replaced by row i of g.
/// Auxiliary frame slots (beyond the 2m matrix columns) are left fixed.
pub fn act(f: &Polynomial, g: &GroupElem, spec: &FieldSpec) -> Polynomial {
    let frame = f.frame().clone();
    let n = g.n();
    assert!(frame.len() >= n, "matrix larger than the frame");
    let images: Vec<Polynomial> = (0..frame.len())
        .map(|pos| {
            if pos < n {
                let mut im = Polynomial::zero(&frame, spec);
                for c in 0..n {
                    let coeff = g.entry(pos, c);
                    if coeff != 0 {
                        im = im.add(&Polynomial::var(&frame, spec, c).scale_raw(coeff));
                    }
                }
                im
            } else {
                Polynomial::var(&frame, spec, pos)
            }
        })
        .collect();
    f.substitute(&images)
}

/// Orbit of a linear form (coefficient row) under the generated group.
pub fn orbit_linear(v: &[u16], gens: &[GroupElem], spec: &FieldSpec) -> Vec<Vec<u16>> {
    let mut seen: HashSet<Vec<u16>> = HashSet::new();
    let mut order: Vec<Vec<u16>> = Vec::new();
    let mut queue: VecDeque<Vec<u16>> = VecDeque::new();
    seen.insert(v.to_vec());
    order.push(v.to_vec());
    queue.push_back(v.to_vec());
    while let Some(w) = queue.pop_front() {
        for g in gens {
            let wg = g.apply_row(&w, spec);
            if seen.insert(wg.clone()) {
                order.push(wg.clone());
                queue.push_back(wg);
            }
        }
    }
    order.sort();
    order
}

/// Orbit of a point (column vector) under the generated group.
pub fn orbit_point(v: &[u16], gens: &[GroupElem], spec: &FieldSpec) -> Vec<Vec<u16>> {
    let mut seen: HashSet<Vec<u16>> = HashSet::new();
    let mut queue: VecDeque<Vec<u16>> = VecDeque::new();
    seen.insert(v.to_vec());
    queue.push_back(v.to_vec());
    while let Some(w) = queue.pop_front() {
        for g in gens {
            let wg = g.apply_point(&w, spec);
            if seen.insert(wg.clone()) {
                queue.push_back(wg);
            }
        }
    }
    let mut out: Vec<Vec<u16>> = seen.into_iter().collect();
    out.sort();
    out
}

/// The norm of a linear form: the product over its orbit under the generated
/// group, as a polynomial.
pub fn norm(v: &[u16], gens: &[GroupElem], frame: &VarFrame, spec: &FieldSpec) -> Polynomial {
    let orbit = orbit_linear(v, gens, spec);
    let mut out = Polynomial::one(frame, spec);
    for w in orbit {
        let mut lin = Polynomial::zero(frame, spec);
        for (pos, &c) in w.iter().enumerate() {
            if c != 0 {
                lin = lin.add(&Polynomial::var(frame, spec, pos).scale_raw(c));
            }
        }
        out = out.mul(&lin);
    }
    out
}

/// Right-coset representatives of the subgroup generated by `sub_gens` inside
/// the listed `group` elements.
pub fn right_coset_reps(
    group: &[GroupElem],
    sub: &[GroupElem],
    spec: &FieldSpec,
) -> Vec<GroupElem> {
    assert!(!sub.is_empty());
    let mut covered: HashSet<GroupElem> = HashSet::new();
    let mut reps = Vec::new();
    for g in group {
        if covered.contains(g) {
            continue;
        }
        reps.push(g.clone());
        for b in sub {
            covered.insert(b.mul(g, spec));
        }
    }
    reps
}

/// Averaging operator over right cosets of the Borel subgroup: for a
/// B-invariant f, returns (1/2) * sum over cosets Bg of f.g, a G-invariant
/// when the coset count is congruent to 2 mod p.
pub fn reynolds_from_borel(
    f: &Polynomial,
    group: &[GroupElem],
    borel: &[GroupElem],
    spec: &FieldSpec,
) -> Polynomial {
    let reps = right_coset_reps(group, borel, spec);
    let frame = f.frame().clone();
    let mut sum = Polynomial::zero(&frame, spec);
    for g in &reps {
        sum = sum.add(&act(f, g, spec));
    }
    let index_mod_p = (reps.len() as u64 % spec.p() as u64) as i64;
    assert!(
        index_mod_p % spec.p() as i64 != 0,
        "coset count divisible by p: averaging undefined"
    );
    // Normalize so that the identity coset contributes f itself when summed
    // over a transversal: divide by [G:B] mod p.
    sum.scale_raw(spec.inv_raw(spec.raw_from_int(index_mod_p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Monomial;

    fn setup(m: u32, q: u64) -> (VarFrame, FieldSpec) {
        (VarFrame::new(m), FieldSpec::prime(q).unwrap())
    }

    /// The quadratic form sum y_i x_i, preserved by every generator.
    fn xi0(frame: &VarFrame, spec: &FieldSpec) -> Polynomial {
        let mut f = Polynomial::zero(frame, spec);
        for i in 1..=frame.m() {
            let mut e = vec![0u32; frame.len()];
            e[frame.pos_y(i)] = 1;
            e[frame.pos_x(i)] = 1;
            f.add_term(Monomial::from_exps(&e), 1);
        }
        f
    }

    #[test]
    fn hook_generator_matches_the_displayed_action() {
        // m=2, q=3, a_2 = 1: y1 -> y1 + x2, y2 -> y2 - x1, x's fixed.
        let (frame, spec) = setup(2, 3);
        let g = hook_elem(&frame, &spec, 1, 2, true, 1);
        let y1 = Polynomial::var(&frame, &spec, frame.pos_y(1));
        let y2 = Polynomial::var(&frame, &spec, frame.pos_y(2));
        let x1 = Polynomial::var(&frame, &spec, frame.pos_x(1));
        let x2 = Polynomial::var(&frame, &spec, frame.pos_x(2));
        assert_eq!(act(&y1, &g, &spec), y1.add(&x2));
        assert_eq!(act(&y2, &g, &spec), y2.sub(&x1));
        assert_eq!(act(&x1, &g, &spec), x1);
        assert_eq!(act(&x2, &g, &spec), x2);
    }

    #[test]
    fn all_generators_preserve_the_quadratic_form() {
        for (m, q) in [(1, 3), (2, 3), (2, 5), (3, 3)] {
            let (frame, spec) = setup(m, q);
            let f = xi0(&frame, &spec);
            for g in generators(GroupKind::OPlus, &frame, &spec) {
                assert_eq!(act(&f, &g, &spec), f, "m={m} q={q}");
            }
        }
    }

    #[test]
    fn action_composes_with_matrix_multiplication() {
        let (frame, spec) = setup(2, 3);
        let gens = generators(GroupKind::OPlus, &frame, &spec);
        let f = Polynomial::parse(&frame, &spec, "y1^2*x2 + y2*x1 + y1").unwrap();
        for g in gens.iter().take(3) {
            for h in gens.iter().take(3) {
                let lhs = act(&act(&f, g, &spec), h, &spec);
                let rhs = act(&f, &g.mul(h, &spec), &spec);
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn closure_orders_match_formulas() {
        // Small tier: hook/sylow coincide at m=2; Weyl at m=1 gives order 2.
        for (kind, m, q) in [
            (GroupKind::Hook, 2, 3),
            (GroupKind::Sylow, 2, 3),
            (GroupKind::Torus, 2, 3),
            (GroupKind::Borel, 2, 3),
            (GroupKind::OPlus, 1, 3),
            (GroupKind::OPlus, 1, 5),
        ] {
            let (frame, spec) = setup(m, q);
            let gens = generators(kind, &frame, &spec);
            let cl = closure(&gens, &spec).unwrap();
            assert_eq!(
                cl.len() as u64,
                expected_order(kind, m, q).unwrap(),
                "{kind:?} m={m} q={q}"
            );
        }
    }

    #[test]
    fn full_group_order_at_m2_q3() {
        let (frame, spec) = setup(2, 3);
        let gens = generators(GroupKind::OPlus, &frame, &spec);
        let cl = closure(&gens, &spec).unwrap();
        assert_eq!(cl.len(), 1152);
        assert_eq!(expected_order(GroupKind::OPlus, 2, 3), Some(1152));
    }

    #[test]
    fn inverses_close_the_group() {
        let (frame, spec) = setup(2, 3);
        let gens = generators(GroupKind::OPlus, &frame, &spec);
        let cl = closure(&gens, &spec).unwrap();
        let set: HashSet<&GroupElem> = cl.iter().collect();
        for g in cl.iter().take(50) {
            let gi = g.inverse(&spec);
            assert!(set.contains(&gi));
            assert_eq!(g.mul(&gi, &spec), GroupElem::identity(frame.n() as usize));
        }
    }

    #[test]
    fn orbit_of_x1_under_sylow_is_trivial_and_under_full_group_has_32_elements() {
        let (frame, spec) = setup(2, 3);
        let x1 = {
            let mut v = vec![0u16; frame.n() as usize];
            v[frame.pos_x(1)] = 1;
            v
        };
        let sylow = generators(GroupKind::Sylow, &frame, &spec);
        assert_eq!(orbit_linear(&x1, &sylow, &spec), vec![x1.clone()]);
        let full = generators(GroupKind::OPlus, &frame, &spec);
        // Orbit size (q^m - 1)(q^{m-1} + 1) = 8 * 4 = 32 at m=2, q=3.
        assert_eq!(orbit_linear(&x1, &full, &spec).len(), 32);
    }

    #[test]
    fn norm_degrees_under_sylow() {
        // deg N(x_i) = q^{i-1}, deg N(y_i) = q^{n-i-1}.
        for (m, q) in [(2u32, 3u64), (3, 3)] {
            let (frame, spec) = setup(m, q);
            let gens = generators(GroupKind::Sylow, &frame, &spec);
            let n = 2 * m;
            for i in 1..=m {
                let mut v = vec![0u16; frame.n() as usize];
                v[frame.pos_x(i)] = 1;
                let nx = norm(&v, &gens, &frame, &spec);
                assert_eq!(nx.degree(), Some(q.pow(i - 1) as u64), "N(x{i}) m={m}");
                let mut w = vec![0u16; frame.n() as usize];
                w[frame.pos_y(i)] = 1;
                let ny = norm(&w, &gens, &frame, &spec);
                assert_eq!(ny.degree(), Some(q.pow(n - i - 1) as u64), "N(y{i}) m={m}");
            }
        }
    }

    #[test]
    fn sylow_order_at_m3() {
        let (frame, spec) = setup(3, 3);
        let gens = generators(GroupKind::Sylow, &frame, &spec);
        let cl = closure(&gens, &spec).unwrap();
        assert_eq!(cl.len() as u64, 3u64.pow(6));
        let hook = generators(GroupKind::Hook, &frame, &spec);
        assert_eq!(closure(&hook, &spec).unwrap().len() as u64, 3u64.pow(4));
    }

    #[test]
    fn borel_cosets_at_m2_q3() {
        let (frame, spec) = setup(2, 3);
        let group = closure(&generators(GroupKind::OPlus, &frame, &spec), &spec).unwrap();
        let borel = closure(&generators(GroupKind::Borel, &frame, &spec), &spec).unwrap();
        let reps = right_coset_reps(&group, &borel, &spec);
        assert_eq!(reps.len(), 32);
        // Index 32 = 2 mod 3, so the averaging operator is defined.
        assert_eq!(reps.len() % 3, 2);
    }

    #[test]
    fn points_transform_consistently_with_forms() {
        // Invariance seen from both sides: xi0(g.v) = xi0(v).
        let (frame, spec) = setup(2, 3);
        let f = xi0(&frame, &spec);
        let gens = generators(GroupKind::OPlus, &frame, &spec);
        for g in &gens {
            for v in [[1u16, 0, 2, 1], [0, 1, 1, 1], [2, 2, 0, 1]] {
                let gv = g.apply_point(&v, &spec);
                assert_eq!(f.eval_raw(&gv, &spec), f.eval_raw(&v, &spec));
            }
        }
    }
}
