//! The memoized invariant catalog for one parameter pair (q, m).
//!
//! One [`Catalog`] per (q, m) holds the quadratic form and its Frobenius
//! twists xi_i, the Sylow orbits of the coordinate forms and their norms, the
//! top orbit product u and its Steenrod quotients d_i, all built lazily and
//! shared behind an `Arc`.  Free functions provide the surrounding named
//! objects: the Catalan-coefficient correction term c22, maximal minors of
//! the twist matrix on the T-side, Dickson invariants of linear spans, block
//! bases and parameter systems for the module structure over the subgroup
//! chain, and the x_1-adic compliance bookkeeping used in the hook-subgroup
//! analysis.
//!
//! Everything degree-only (block-basis enumeration, parameter degrees) is
//! computed from closed formulas and never forces a polynomial build; the
//! expensive objects (norms, u, d_i at m = 3) are only constructed when a
//! caller asks for the polynomial itself.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::gf::{catalan, digit_sum, FieldSpec};
use crate::matgroup::{generators, orbit_linear, GroupElem, GroupKind};
use crate::ring::{Monomial, Polynomial, TPolynomial, VarFrame};
use crate::steenrod::{psi1, psi_j, steenrod};

// ---------------------------------------------------------------------------
// Degree formulas.  All closed-form, no polynomial arithmetic.
// ---------------------------------------------------------------------------

/// deg xi_i = q^i + 1.
pub fn deg_xi(q: u64, i: u32) -> u64 {
    q.pow(i) + 1
}

/// deg N(y_i) = q^(n-i-1) with n = 2m.
pub fn deg_norm_y(q: u64, m: u32, i: u32) -> u64 {
    q.pow(2 * m - i - 1)
}

/// deg N(x_i) = q^(i-1).
pub fn deg_norm_x(q: u64, _m: u32, i: u32) -> u64 {
    q.pow(i - 1)
}

/// deg u = (q^(m-1) + 1) * (1 + q + ... + q^(m-1)).
pub fn deg_u(q: u64, m: u32) -> u64 {
    (q.pow(m - 1) + 1) * (0..m).map(|j| q.pow(j)).sum::<u64>()
}

/// The Steenrod index e(i, m) = sum_{j=1..i} q^(n-1-j) with u * d_i = P^e(u).
pub fn e_shift(q: u64, m: u32, i: u32) -> u64 {
    let n = 2 * m;
    (1..=i).map(|j| q.pow(n - 1 - j)).sum()
}

/// deg d_i = (q - 1) * e(i, m) = q^(n-1) - q^(n-1-i).
pub fn deg_d(q: u64, m: u32, i: u32) -> u64 {
    let n = 2 * m;
    let d = q.pow(n - 1) - q.pow(n - 1 - i);
    debug_assert_eq!(d, (q - 1) * e_shift(q, m, i));
    d
}

/// deg psi_j(xi_i) = q^j * (q^i + 1).
pub fn deg_psi_j_xi(q: u64, j: u32, i: u32) -> u64 {
    q.pow(j) * deg_xi(q, i)
}

// ---------------------------------------------------------------------------
// Free builders.
// ---------------------------------------------------------------------------

/// The linear form with the given coefficient row (row indices are frame
/// positions; short rows leave the remaining variables with coefficient 0).
pub fn linear_form(frame: &VarFrame, spec: &FieldSpec, row: &[u16]) -> Polynomial {
    let mut f = Polynomial::zero(frame, spec);
    for (pos, &c) in row.iter().enumerate() {
        if c != 0 {
            f = f.add(&Polynomial::var(frame, spec, pos).scale_raw(c));
        }
    }
    f
}

/// xi_0 = sum y_j x_j; for i > 0, xi_i = sum_j (y_j^(q^i) x_j + y_j x_j^(q^i)).
pub fn xi_poly(frame: &VarFrame, spec: &FieldSpec, i: u32) -> Polynomial {
    let m = frame.m();
    let qi = (spec.q() as u64).pow(i);
    assert!(
        qi <= frame.max_exponent() as u64,
        "xi_{i} needs exponent {qi}, beyond the packing"
    );
    let qi = qi as u32;
    let mut f = Polynomial::zero(frame, spec);
    for j in 1..=m {
        let (py, px) = (frame.pos_y(j), frame.pos_x(j));
        let mut exps = vec![0u32; frame.len()];
        exps[py] = qi;
        exps[px] = 1;
        f.add_term(Monomial::from_exps(&exps), 1);
        if i > 0 {
            let mut exps = vec![0u32; frame.len()];
            exps[py] = 1;
            exps[px] = qi;
            f.add_term(Monomial::from_exps(&exps), 1);
        }
    }
    f
}

// ---------------------------------------------------------------------------
// The catalog.
// ---------------------------------------------------------------------------

static REGISTRY: OnceLock<Mutex<HashMap<(u64, u32), Arc<Catalog>>>> = OnceLock::new();

/// The shared catalog for (q, m), created on first use.
pub fn catalog(q: u64, m: u32) -> Arc<Catalog> {
    let reg = REGISTRY.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = reg.lock().unwrap();
    map.entry((q, m))
        .or_insert_with(|| Arc::new(Catalog::new(q, m)))
        .clone()
}

/// Lazily built named invariants for one (q, m).  Cheap data (frames, Sylow
/// generators, coordinate orbits) is eager; polynomials are built on first
/// request and cached.
pub struct Catalog {
    q: u64,
    m: u32,
    frame: VarFrame,
    spec: FieldSpec,
    sylow: Vec<GroupElem>,
    orbits_y: Vec<Vec<Vec<u16>>>,
    orbits_x: Vec<Vec<Vec<u16>>>,
    xis: Vec<OnceLock<Polynomial>>,
    norms_y: Vec<OnceLock<Polynomial>>,
    norms_x: Vec<OnceLock<Polynomial>>,
    u_cell: OnceLock<Polynomial>,
    d_cells: Vec<OnceLock<Polynomial>>,
}

impl Catalog {
    fn new(q: u64, m: u32) -> Catalog {
        let frame = VarFrame::new(m);
        let spec = FieldSpec::prime(q).expect("q must be an odd prime");
        let sylow = generators(GroupKind::Sylow, &frame, &spec);
        let n = (2 * m) as usize;
        let mut orbits_y = Vec::new();
        let mut orbits_x = Vec::new();
        for i in 1..=m {
            let mut row = vec![0u16; n];
            row[frame.pos_y(i)] = 1;
            orbits_y.push(orbit_linear(&row, &sylow, &spec));
            let mut row = vec![0u16; n];
            row[frame.pos_x(i)] = 1;
            orbits_x.push(orbit_linear(&row, &sylow, &spec));
        }
        Catalog {
            q,
            m,
            frame,
            spec,
            sylow,
            orbits_y,
            orbits_x,
            xis: (0..=2 * m).map(|_| OnceLock::new()).collect(),
            norms_y: (0..m).map(|_| OnceLock::new()).collect(),
            norms_x: (0..m).map(|_| OnceLock::new()).collect(),
            u_cell: OnceLock::new(),
            d_cells: (0..=m).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        2 * self.m
    }

    pub fn frame(&self) -> &VarFrame {
        &self.frame
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    /// Generators of the Sylow p-subgroup used for the orbit norms.
    pub fn sylow_generators(&self) -> &[GroupElem] {
        &self.sylow
    }

    /// Sorted orbit of the coordinate form y_i under the Sylow subgroup.
    pub fn orbit_y(&self, i: u32) -> &[Vec<u16>] {
        &self.orbits_y[(i - 1) as usize]
    }

    /// Sorted orbit of the coordinate form x_i under the Sylow subgroup.
    pub fn orbit_x(&self, i: u32) -> &[Vec<u16>] {
        &self.orbits_x[(i - 1) as usize]
    }

    /// xi_i; defined for 0 <= i <= n as long as q^i fits the packing.
    pub fn xi(&self, i: u32) -> &Polynomial {
        self.xis[i as usize].get_or_init(|| xi_poly(&self.frame, &self.spec, i))
    }

    /// The orbit norm N(y_i): product of the Sylow orbit of y_i.
    pub fn norm_y(&self, i: u32) -> &Polynomial {
        self.norms_y[(i - 1) as usize].get_or_init(|| {
            let f = self.orbit_product(&self.orbits_y[(i - 1) as usize]);
            assert_eq!(f.degree(), Some(deg_norm_y(self.q, self.m, i)));
            f
        })
    }

    /// The orbit norm N(x_i); N(x_1) = x_1.
    pub fn norm_x(&self, i: u32) -> &Polynomial {
        self.norms_x[(i - 1) as usize].get_or_init(|| {
            let f = self.orbit_product(&self.orbits_x[(i - 1) as usize]);
            assert_eq!(f.degree(), Some(deg_norm_x(self.q, self.m, i)));
            f
        })
    }

    fn orbit_product(&self, orbit: &[Vec<u16>]) -> Polynomial {
        let mut f = Polynomial::one(&self.frame, &self.spec);
        for row in orbit {
            f = f.mul(&linear_form(&self.frame, &self.spec, row));
        }
        f
    }

    /// The top orbit product u = prod_i N(y_i) N(x_i), multiplied smallest
    /// factor first.
    pub fn u(&self) -> &Polynomial {
        self.u_cell.get_or_init(|| {
            let mut factors: Vec<&Polynomial> = Vec::new();
            for i in 1..=self.m {
                factors.push(self.norm_y(i));
                factors.push(self.norm_x(i));
            }
            factors.sort_by_key(|f| f.num_terms());
            let mut u = Polynomial::one(&self.frame, &self.spec);
            for f in factors {
                u = u.mul(f);
            }
            assert_eq!(u.degree(), Some(deg_u(self.q, self.m)));
            u
        })
    }

    /// Every linear factor of u (all coordinate orbits pooled); the factors
    /// are pairwise non-proportional, so chained exact division by this list
    /// divides by u itself.
    pub fn u_linear_factors(&self) -> Vec<Polynomial> {
        let mut out = Vec::new();
        for orbit in self.orbits_x.iter().chain(self.orbits_y.iter()) {
            for row in orbit {
                out.push(linear_form(&self.frame, &self.spec, row));
            }
        }
        assert_eq!(out.len() as u64, deg_u(self.q, self.m));
        out
    }

    /// e(i, m) for this catalog's parameters.
    pub fn e_index(&self, i: u32) -> u64 {
        e_shift(self.q, self.m, i)
    }

    /// The Steenrod quotient d_i = P^(e(i,m))(u) / u, with d_0 = 1.  Small u
    /// divides directly; large u divides by its linear factors one at a
    /// time, which keeps every intermediate close to the final quotient
    /// size.
    pub fn d(&self, i: u32) -> &Polynomial {
        assert!(i <= self.m, "d_{i} is undefined for m = {}", self.m);
        self.d_cells[i as usize].get_or_init(|| {
            if i == 0 {
                return Polynomial::one(&self.frame, &self.spec);
            }
            let u = self.u();
            let pu = steenrod(u, self.e_index(i));
            let quotient = if u.num_terms() <= 1_000 {
                pu.exact_divide(u)
            } else {
                pu.exact_divide_factors(&self.u_linear_factors())
            }
            .expect("the Steenrod image of u must be divisible by u");
            assert_eq!(quotient.degree(), Some(deg_d(self.q, self.m, i)));
            quotient
        })
    }

    /// Degree-and-size summary of every catalog item, for the CLI dump.
    pub fn summary(&self) -> CatalogSummary {
        let mut items = Vec::new();
        let mut push = |name: String, degree: u64, cell: Option<&Polynomial>| {
            items.push(ItemSummary {
                name,
                degree,
                built: cell.is_some(),
                terms: cell.map(|f| f.num_terms()),
            });
        };
        for i in 0..=self.n() {
            if (self.q.pow(i)) <= self.frame.max_exponent() as u64 {
                push(format!("xi{i}"), deg_xi(self.q, i), self.xis[i as usize].get());
            }
        }
        for i in 1..=self.m {
            push(
                format!("Ny{i}"),
                deg_norm_y(self.q, self.m, i),
                self.norms_y[(i - 1) as usize].get(),
            );
            push(
                format!("Nx{i}"),
                deg_norm_x(self.q, self.m, i),
                self.norms_x[(i - 1) as usize].get(),
            );
        }
        push("u".to_string(), deg_u(self.q, self.m), self.u_cell.get());
        for i in 1..=self.m {
            push(
                format!("d{i}"),
                deg_d(self.q, self.m, i),
                self.d_cells[i as usize].get(),
            );
        }
        CatalogSummary {
            q: self.q,
            m: self.m,
            orbit_sizes_y: self.orbits_y.iter().map(|o| o.len()).collect(),
            orbit_sizes_x: self.orbits_x.iter().map(|o| o.len()).collect(),
            items,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ItemSummary {
    pub name: String,
    pub degree: u64,
    pub built: bool,
    pub terms: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogSummary {
    pub q: u64,
    pub m: u32,
    pub orbit_sizes_y: Vec<usize>,
    pub orbit_sizes_x: Vec<usize>,
    pub items: Vec<ItemSummary>,
}

// ---------------------------------------------------------------------------
// The T-side: evaluation, the correction term c22, maximal minors.
// ---------------------------------------------------------------------------

/// Evaluates a T-polynomial at T_i = xi_i.
pub fn phi_eval(cat: &Catalog, f: &TPolynomial) -> Polynomial {
    let mut powers: HashMap<(u32, u32), Polynomial> = HashMap::new();
    let mut acc = Polynomial::zero(cat.frame(), cat.spec());
    for (exps, c) in f.terms_logical() {
        let mut term = Polynomial::one(cat.frame(), cat.spec());
        for (i, &e) in exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let p = powers
                .entry((i as u32, e))
                .or_insert_with(|| cat.xi(i as u32).pow(e))
                .clone();
            term = term.mul(&p);
        }
        acc = acc.add(&term.scale_raw(c));
    }
    acc
}

/// The correction term c22 as a T-polynomial in T_0, T_1:
/// sum_{j=0..(q-1)/2} Catalan(j) T_0^(j(q+1)+1) T_1^(q-1-2j).
pub fn c22_t(spec: &FieldSpec, k: u32) -> TPolynomial {
    assert!(spec.k() == 1, "c22 is defined over prime fields");
    assert!(k >= 1);
    let q = spec.q() as u64;
    let p = spec.p() as u64;
    let mut out = TPolynomial::zero(spec, k);
    for j in 0..=(q - 1) / 2 {
        let coeff = (catalan(j) % p) as i64;
        if coeff == 0 {
            continue;
        }
        let mut exps = vec![0u32; (k + 1) as usize];
        exps[0] = (j * (q + 1) + 1) as u32;
        exps[1] = (q - 1 - 2 * j) as u32;
        out.add_term_logical(&exps, spec.raw_from_int(coeff));
    }
    out
}

/// c22 evaluated at T_i = xi_i in the catalog's frame.
pub fn c22_poly(cat: &Catalog) -> Polynomial {
    phi_eval(cat, &c22_t(cat.spec(), 1))
}

/// The m x (m+1) twist matrix has entry (j, k) = T_(n-j-k+1)^(q^(j-1)) for
/// 1 <= j <= m, 1 <= k <= m+1.  `minor_m(spec, m, i)` is the maximal minor
/// that deletes column i + 1, as a T-polynomial with variables up to T_(n-1).
pub fn minor_m(spec: &FieldSpec, m: u32, i: u32) -> TPolynomial {
    assert!(i <= m, "column index out of range");
    let n = 2 * m;
    let k = n - 1;
    let q = spec.q() as u64;
    let cols: Vec<u32> = (1..=m + 1).filter(|&c| c != i + 1).collect();
    let mat: Vec<Vec<TPolynomial>> = (1..=m)
        .map(|j| {
            cols.iter()
                .map(|&c| {
                    let idx = n + 1 - j - c;
                    TPolynomial::var(spec, k, idx).pow(q.pow(j - 1) as u32)
                })
                .collect()
        })
        .collect();
    t_det(&mat, spec, k)
}

fn t_det(mat: &[Vec<TPolynomial>], spec: &FieldSpec, k: u32) -> TPolynomial {
    let size = mat.len();
    if size == 1 {
        return mat[0][0].clone();
    }
    let mut acc = TPolynomial::zero(spec, k);
    for c in 0..size {
        let sub: Vec<Vec<TPolynomial>> = mat[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != c)
                    .map(|(_, e)| e.clone())
                    .collect()
            })
            .collect();
        let cof = mat[0][c].mul(&t_det(&sub, spec, k));
        acc = if c % 2 == 0 {
            acc.add(&cof)
        } else {
            acc.sub(&cof)
        };
    }
    acc
}

// ---------------------------------------------------------------------------
// Dickson invariants of a linear span.
// ---------------------------------------------------------------------------

/// The i-th Dickson invariant of the span of the given independent linear
/// forms, under the convention
/// prod_{w in span}(Z - w) = sum_i (-1)^i d_i Z^(q^(l-i)), d_0 = 1.
pub fn dickson(vars: &[Polynomial], i: u32) -> Polynomial {
    assert!(!vars.is_empty(), "need at least one linear form");
    let l = vars.len() as u32;
    assert!(i <= l, "index beyond the span dimension");
    let base = vars[0].frame().clone();
    let spec = vars[0].spec().clone();
    let rows: Vec<Vec<u16>> = vars
        .iter()
        .map(|v| {
            assert_eq!(
                v.homogeneous_degree(),
                Some(1),
                "span generators must be linear forms"
            );
            let mut row = vec![0u16; base.len()];
            for (mono, c) in v.terms() {
                let pos = mono.exps().iter().position(|&e| e > 0).unwrap();
                row[pos] = c;
            }
            row
        })
        .collect();
    assert_eq!(
        rank_rows(&rows, &spec),
        vars.len(),
        "span generators must be linearly independent"
    );

    let aug = base.with_aux(&["dspan"]);
    let zpos = aug.pos_aux("dspan");
    let lift: Vec<Polynomial> = (0..base.len())
        .map(|p| Polynomial::var(&aug, &spec, p))
        .collect();
    let lifted: Vec<Polynomial> = vars.iter().map(|v| v.substitute(&lift)).collect();
    let z = Polynomial::var(&aug, &spec, zpos);
    let elems: Vec<u16> = spec.raw_elems().collect();

    let mut prod = Polynomial::one(&aug, &spec);
    let mut idx = vec![0usize; vars.len()];
    'span: loop {
        let mut w = z.clone();
        for (j, &ci) in idx.iter().enumerate() {
            if elems[ci] != 0 {
                w = w.sub(&lifted[j].scale_raw(elems[ci]));
            }
        }
        prod = prod.mul(&w);
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                break 'span;
            }
            idx[pos] += 1;
            if idx[pos] < elems.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }

    let coeffs = prod.coeffs_by_var(zpos);
    let ql = spec.q() as u64;
    debug_assert!(coeffs.keys().all(|&e| {
        let mut t = e as u64;
        while t > 1 && t % ql == 0 {
            t /= ql;
        }
        t == 1 || e == 0
    }));
    let target = ql.pow(l - i) as u32;
    let c = match coeffs.get(&target) {
        Some(c) => c.clone(),
        None => Polynomial::zero(&aug, &spec),
    };
    let signed = if i % 2 == 1 { c.neg() } else { c };
    signed.restrict_to(&base)
}

fn rank_rows(rows: &[Vec<u16>], spec: &FieldSpec) -> usize {
    let mut mat: Vec<Vec<u16>> = rows.to_vec();
    let ncols = mat.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pr) = (rank..mat.len()).find(|&r| mat[r][col] != 0) else {
            continue;
        };
        mat.swap(rank, pr);
        let inv = spec.inv_raw(mat[rank][col]);
        for r in 0..mat.len() {
            if r != rank && mat[r][col] != 0 {
                let factor = spec.mul_raw(mat[r][col], inv);
                for c in col..ncols {
                    let sub = spec.mul_raw(factor, mat[rank][c]);
                    mat[r][c] = spec.sub_raw(mat[r][c], sub);
                }
            }
        }
        rank += 1;
        if rank == mat.len() {
            break;
        }
    }
    rank
}

// ---------------------------------------------------------------------------
// Parameter systems and block bases.
// ---------------------------------------------------------------------------

/// Which homogeneous system of parameters to assemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HsopKind {
    /// xi_0..xi_(m-1) together with d_1..d_m (full orthogonal group).
    FullGroup,
    /// The 2m coordinate norms (Sylow subgroup).
    SylowNorms,
    /// N(y_i)^(q-1), N(x_i)^(q-1), N(y_i)N(x_i) per pair (Borel subgroup).
    BorelNorms,
}

/// The labelled parameter polynomials for the requested subgroup level.
/// Building the FullGroup list forces u and the d_i.
pub fn hsop(cat: &Catalog, kind: HsopKind) -> Vec<(String, Polynomial)> {
    let q = cat.q();
    let mut out = Vec::new();
    match kind {
        HsopKind::FullGroup => {
            for i in 0..cat.m() {
                out.push((format!("xi{i}"), cat.xi(i).clone()));
            }
            for i in 1..=cat.m() {
                out.push((format!("d{i}"), cat.d(i).clone()));
            }
        }
        HsopKind::SylowNorms => {
            for i in 1..=cat.m() {
                out.push((format!("Ny{i}"), cat.norm_y(i).clone()));
            }
            for i in 1..=cat.m() {
                out.push((format!("Nx{i}"), cat.norm_x(i).clone()));
            }
        }
        HsopKind::BorelNorms => {
            for i in 1..=cat.m() {
                let ny = cat.norm_y(i);
                let nx = cat.norm_x(i);
                out.push((format!("Ny{i}^{}", q - 1), ny.pow((q - 1) as u32)));
                out.push((format!("Nx{i}^{}", q - 1), nx.pow((q - 1) as u32)));
                out.push((format!("Ny{i}Nx{i}"), ny.mul(nx)));
            }
        }
    }
    out
}

/// Which block decomposition to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    /// Full group: factors of Gamma = prod_{i=m..n-2} xi_i^(q^(n-i-1) - 1)
    /// over the parameter algebra from xi_0..xi_(m-1), d_1..d_m.
    Gamma,
    /// Sylow, norm form: factors of Gamma_0 = prod_{i=0..n-3} xi_i^(e_i),
    /// e_i = q^(m-1-floor(i/2)) - 1, over the 2m norms.
    Gamma0,
    /// Hook: factors of (xi_0 ... xi_(n-3))^(q-1) over x_1, the 2m-2 twisted
    /// coordinate images, and N(y_1).
    Bh,
    /// Sylow, subduction form: factors of prod psi_j(xi_i)^(q-1) over the 2m
    /// norms.
    Bhc,
    /// Borel: pair products (N(y_i)N(x_i))^(c_i), c_i <= q-2, times Gamma_0
    /// factors, over the (q-1)-th powers of the 2m norms.
    Htilde0,
}

/// A free-module block description: the top monomial's exponent bounds in
/// labelled generators, the degree list of every factor of the top monomial,
/// and the degrees of the polynomial base ring it is a basis over.  Degrees
/// only; nothing here forces a polynomial build.
#[derive(Debug, Clone, Serialize)]
pub struct BlockBasis {
    pub kind: String,
    /// (label, generator degree, maximal exponent).
    pub bounds: Vec<(String, u64, u32)>,
    /// Degrees of the base-ring parameters.
    pub hsop_degrees: Vec<u64>,
    /// Degree of every factor of the top monomial, ascending; the length is
    /// the module rank.
    pub factor_degrees: Vec<u64>,
}

pub fn block_basis(cat: &Catalog, kind: BlockKind) -> BlockBasis {
    let q = cat.q();
    let m = cat.m();
    let n = 2 * m;
    let gamma0_bounds = || -> Vec<(String, u64, u32)> {
        (0..=n.saturating_sub(3))
            .filter(|_| n >= 3)
            .map(|i| {
                let e = q.pow(m - 1 - i / 2) - 1;
                (format!("xi{i}"), deg_xi(q, i), e as u32)
            })
            .collect()
    };
    let norm_degrees = || -> Vec<u64> {
        let mut v: Vec<u64> = (1..=m).map(|i| deg_norm_y(q, m, i)).collect();
        v.extend((1..=m).map(|i| deg_norm_x(q, m, i)));
        v
    };
    let (name, bounds, hsop_degrees) = match kind {
        BlockKind::Gamma => {
            let bounds: Vec<(String, u64, u32)> = (m..=n - 2)
                .map(|i| {
                    let e = q.pow(n - i - 1) - 1;
                    (format!("xi{i}"), deg_xi(q, i), e as u32)
                })
                .collect();
            let mut hs: Vec<u64> = (0..m).map(|i| deg_xi(q, i)).collect();
            hs.extend((1..=m).map(|i| deg_d(q, m, i)));
            ("Gamma", bounds, hs)
        }
        BlockKind::Gamma0 => ("Gamma0", gamma0_bounds(), norm_degrees()),
        BlockKind::Bh => {
            let bounds: Vec<(String, u64, u32)> = (0..=n.saturating_sub(3))
                .filter(|_| n >= 3)
                .map(|i| (format!("xi{i}"), deg_xi(q, i), (q - 1) as u32))
                .collect();
            let mut hs = vec![1u64];
            for _ in 0..2 * (m - 1) {
                hs.push(q);
            }
            hs.push(q.pow(n - 2));
            ("Bh", bounds, hs)
        }
        BlockKind::Bhc => {
            let mut bounds = Vec::new();
            for j in 0..m {
                if n < 3 + 2 * j {
                    break;
                }
                for i in 0..=n - 3 - 2 * j {
                    bounds.push((
                        format!("psi{j}_xi{i}"),
                        deg_psi_j_xi(q, j, i),
                        (q - 1) as u32,
                    ));
                }
            }
            ("Bhc", bounds, norm_degrees())
        }
        BlockKind::Htilde0 => {
            let mut bounds: Vec<(String, u64, u32)> = (1..=m)
                .map(|i| {
                    let deg = deg_norm_y(q, m, i) + deg_norm_x(q, m, i);
                    (format!("Ny{i}Nx{i}"), deg, (q - 2) as u32)
                })
                .collect();
            bounds.extend(gamma0_bounds());
            let hs: Vec<u64> = norm_degrees().into_iter().map(|d| (q - 1) * d).collect();
            ("Htilde0", bounds, hs)
        }
    };
    let mut factor_degrees = vec![0u64];
    for &(_, gdeg, emax) in &bounds {
        let mut next = Vec::with_capacity(factor_degrees.len() * (emax as usize + 1));
        for e in 0..=emax as u64 {
            for &d in &factor_degrees {
                next.push(d + e * gdeg);
            }
        }
        factor_degrees = next;
    }
    factor_degrees.sort_unstable();
    BlockBasis {
        kind: name.to_string(),
        bounds,
        hsop_degrees,
        factor_degrees,
    }
}

/// The labelled generating set whose initial algebra is certified for the
/// given subgroup: norms plus twisted forms for the Sylow subgroup, the
/// hook-level algebra generators, the Borel minimal set, or the full-group
/// minimal set.  Heavy members (norms, d_i) build on demand.
pub fn khovanskii_generators(cat: &Catalog, kind: GroupKind) -> Vec<(String, Polynomial)> {
    let m = cat.m();
    let n = 2 * m;
    let mut out = Vec::new();
    match kind {
        GroupKind::Sylow => {
            for i in 1..=m {
                out.push((format!("Ny{i}"), cat.norm_y(i).clone()));
            }
            for i in 1..=m {
                out.push((format!("Nx{i}"), cat.norm_x(i).clone()));
            }
            for j in 0..m {
                if n < 3 + 2 * j {
                    break;
                }
                for i in 0..=n - 3 - 2 * j {
                    let f = if j == 0 {
                        cat.xi(i).clone()
                    } else {
                        psi_j(cat.xi(i), j)
                    };
                    let label = if j == 0 {
                        format!("xi{i}")
                    } else {
                        format!("psi{j}_xi{i}")
                    };
                    out.push((label, f));
                }
            }
        }
        GroupKind::Hook => {
            out.push((
                "x1".to_string(),
                Polynomial::var(cat.frame(), cat.spec(), cat.frame().pos_x(1)),
            ));
            for i in 2..=m {
                let y = Polynomial::var(cat.frame(), cat.spec(), cat.frame().pos_y(i));
                out.push((format!("Y{i}"), psi1(&y)));
            }
            for i in 2..=m {
                let x = Polynomial::var(cat.frame(), cat.spec(), cat.frame().pos_x(i));
                out.push((format!("X{i}"), psi1(&x)));
            }
            out.push(("Ny1".to_string(), cat.norm_y(1).clone()));
            for i in 0..=n.saturating_sub(3) {
                if n >= 3 {
                    out.push((format!("xi{i}"), cat.xi(i).clone()));
                }
            }
        }
        GroupKind::Borel => {
            out = hsop(cat, HsopKind::BorelNorms);
            for i in 0..=n.saturating_sub(3) {
                if n >= 3 {
                    out.push((format!("xi{i}"), cat.xi(i).clone()));
                }
            }
        }
        GroupKind::OPlus => {
            for i in 0..=n - 2 {
                out.push((format!("xi{i}"), cat.xi(i).clone()));
            }
            for i in 1..=m {
                out.push((format!("d{i}"), cat.d(i).clone()));
            }
        }
        _ => panic!("no generating set is catalogued for {kind:?}"),
    }
    out
}

// ---------------------------------------------------------------------------
// Compliance bookkeeping for the hook-subgroup analysis.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct ComplianceRow {
    /// Exponent of y_1.
    pub k: u32,
    /// Base-q digit sum of k.
    pub digit_sum: u64,
    /// x_1-adic valuation of the coefficient of y_1^k.
    pub x1_valuation: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct Compliance {
    pub rows: Vec<ComplianceRow>,
    /// Every k >= 1 satisfies x1_valuation >= digit_sum - 1.
    pub compliant: bool,
    /// Every k satisfies x1_valuation >= digit_sum.
    pub strongly_compliant: bool,
}

/// Decomposes f by powers of y_1 and compares the x_1-adic valuation of each
/// coefficient with the base-q digit sum of the exponent.
pub fn compliance(f: &Polynomial) -> Compliance {
    let q = f.spec().q() as u64;
    let ypos = f.frame().pos_y(1);
    let xpos = f.frame().pos_x(1);
    let mut rows = Vec::new();
    let mut compliant = true;
    let mut strongly = true;
    for (k, coeff) in f.coeffs_by_var(ypos) {
        let val = coeff
            .min_var_exponent(xpos)
            .expect("nonzero coefficient expected");
        let ds = digit_sum(k as u64, q);
        if k >= 1 && (val as u64) + 1 < ds {
            compliant = false;
        }
        if (val as u64) < ds {
            strongly = false;
        }
        rows.push(ComplianceRow {
            k,
            digit_sum: ds,
            x1_valuation: val,
        });
    }
    Compliance {
        rows,
        compliant,
        strongly_compliant: strongly,
    }
}

/// The averaging substitution used to prove compliance is preserved:
/// T(f) = prod_{a in F_q} f(y -> y + a u, t -> t - a x), with the variables
/// named by frame position.
pub fn t_operator(
    f: &Polynomial,
    y_pos: usize,
    u_pos: usize,
    t_pos: usize,
    x_pos: usize,
) -> Polynomial {
    let frame = f.frame().clone();
    let spec = f.spec().clone();
    let elems: Vec<u16> = spec.raw_elems().collect();
    let mut out = Polynomial::one(&frame, &spec);
    for &a in &elems {
        let images: Vec<Polynomial> = (0..frame.len())
            .map(|pos| {
                let v = Polynomial::var(&frame, &spec, pos);
                if pos == y_pos && a != 0 {
                    v.add(&Polynomial::var(&frame, &spec, u_pos).scale_raw(a))
                } else if pos == t_pos && a != 0 {
                    v.sub(&Polynomial::var(&frame, &spec, x_pos).scale_raw(a))
                } else {
                    v
                }
            })
            .collect();
        out = out.mul(&f.substitute(&images));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::act;
    use crate::ring::MonomialOrder;
    use crate::steenrod::sigma_shift;

    #[test]
    fn xi_degrees_and_lead_terms() {
        let cat = catalog(3, 2);
        for i in 0..=4u32 {
            let f = cat.xi(i);
            assert_eq!(f.degree(), Some(deg_xi(3, i)));
            let (lt, c) = f.lead_term_lex().unwrap();
            assert_eq!(c, 1);
            let mut exps = vec![0u32; 4];
            exps[0] = 3u32.pow(i);
            exps[3] = 1;
            assert_eq!(lt, Monomial::from_exps(&exps), "lex lead of xi_{i}");
        }
    }

    #[test]
    fn xi_forms_are_invariant_under_the_group_generators() {
        for (q, m) in [(3u64, 1u32), (3, 2), (5, 2)] {
            let cat = catalog(q, m);
            let gens = generators(GroupKind::OPlus, cat.frame(), cat.spec());
            for i in 0..cat.n() {
                let f = cat.xi(i);
                for g in &gens {
                    assert_eq!(&act(f, g, cat.spec()), f, "xi_{i} moved at q={q} m={m}");
                }
            }
        }
    }

    #[test]
    fn one_pair_catalog_is_classical() {
        let cat = catalog(3, 1);
        let u = cat.u();
        assert_eq!(u, cat.xi(0), "u at one pair is the quadratic form");
        assert_eq!(cat.e_index(1), 1);
        let d1 = cat.d(1);
        let expect = Polynomial::parse(cat.frame(), cat.spec(), "y1^2 + x1^2").unwrap();
        assert_eq!(d1, &expect);
        // xi_1 = xi_0 * d_1 at one pair.
        assert_eq!(&cat.xi(0).mul(d1), cat.xi(1));
    }

    #[test]
    fn norm_degrees_come_from_orbit_sizes() {
        let cat = catalog(3, 2);
        assert_eq!(cat.orbit_y(1).len(), 9);
        assert_eq!(cat.orbit_y(2).len(), 3);
        assert_eq!(cat.orbit_x(2).len(), 3);
        assert_eq!(cat.orbit_x(1).len(), 1);
        let x1 = Polynomial::var(cat.frame(), cat.spec(), cat.frame().pos_x(1));
        assert_eq!(cat.norm_x(1), &x1);
        assert_eq!(cat.norm_y(1).degree(), Some(9));
        assert_eq!(cat.u().degree(), Some(16));
        assert_eq!(cat.u_linear_factors().len(), 16);
    }

    #[test]
    fn u_two_pairs_matches_its_t_side_expression() {
        for q in [3u64, 5] {
            let cat = catalog(q, 2);
            let qe = q as u32;
            // T0^q * (T2 + c22) - T1^(q+1)
            let t0 = TPolynomial::var(cat.spec(), 2, 0);
            let t1 = TPolynomial::var(cat.spec(), 2, 1);
            let t2 = TPolynomial::var(cat.spec(), 2, 2);
            let expr = t0
                .pow(qe)
                .mul(&t2.add(&c22_t(cat.spec(), 2)))
                .sub(&t1.pow(qe + 1));
            assert_eq!(
                &phi_eval(&cat, &expr),
                cat.u(),
                "norm product differs from the T-side expression at q={q}"
            );
        }
    }

    #[test]
    fn c22_closed_forms() {
        let s3 = FieldSpec::prime(3).unwrap();
        assert_eq!(
            c22_t(&s3, 1),
            TPolynomial::parse(&s3, 1, "T0*T1^2 + T0^5").unwrap()
        );
        let s5 = FieldSpec::prime(5).unwrap();
        assert_eq!(
            c22_t(&s5, 1),
            TPolynomial::parse(&s5, 1, "T0*T1^4 + T0^7*T1^2 + 2*T0^13").unwrap()
        );
    }

    #[test]
    fn maximal_minors_of_the_twist_matrix() {
        let spec = FieldSpec::prime(3).unwrap();
        let m0 = minor_m(&spec, 2, 0);
        assert_eq!(m0, TPolynomial::parse(&spec, 3, "T2*T0^3 + 2*T1^4").unwrap());
        let m1 = minor_m(&spec, 2, 1);
        assert_eq!(m1, TPolynomial::parse(&spec, 3, "T3*T0^3 + 2*T1*T2^3").unwrap());
        let m2 = minor_m(&spec, 2, 2);
        assert_eq!(m2, TPolynomial::parse(&spec, 3, "T3*T1^3 + 2*T2^4").unwrap());
        for i in 0..=2 {
            assert_eq!(
                minor_m(&spec, 2, i).valuation(),
                Some(1 + 3),
                "valuation of minor {i}"
            );
        }
    }

    #[test]
    fn dickson_invariants_of_small_spans() {
        let frame = VarFrame::new(1);
        let spec = FieldSpec::prime(3).unwrap();
        let y1 = Polynomial::var(&frame, &spec, 0);
        assert_eq!(dickson(&[y1.clone()], 0), Polynomial::one(&frame, &spec));
        assert_eq!(
            dickson(&[y1.clone()], 1),
            Polynomial::parse(&frame, &spec, "y1^2").unwrap()
        );

        let frame2 = VarFrame::new(2);
        let y1 = Polynomial::var(&frame2, &spec, 0);
        let y2 = Polynomial::var(&frame2, &spec, 1);
        for i in 0..=2u32 {
            let d = dickson(&[y1.clone(), y2.clone()], i);
            if i > 0 {
                assert_eq!(d.degree(), Some(9 - 3u64.pow(2 - i)), "degree of d_{i}");
            }
            // The span is basis-independent: a different generating pair of
            // the same plane gives the same invariants.
            let alt = dickson(&[y2.add(&y1), y1.scale(2)], i);
            assert_eq!(d, alt, "basis dependence in d_{i}");
        }
    }

    #[test]
    fn d_quotients_at_two_pairs() {
        let cat = catalog(3, 2);
        assert_eq!(cat.e_index(1), 9);
        assert_eq!(cat.e_index(2), 12);
        let d1 = cat.d(1);
        let d2 = cat.d(2);
        assert_eq!(d1.degree(), Some(18));
        assert_eq!(d2.degree(), Some(24));
        let (lt1, c1) = d1.lead_term_lex().unwrap();
        assert_eq!((lt1, c1), (Monomial::from_exps(&[18, 0, 0, 0]), 1));
        let (lt2, _) = d2.lead_term(&MonomialOrder::Grevlex).unwrap();
        assert_eq!(lt2, Monomial::from_exps(&[18, 6, 0, 0]));
        // Invariance spot checks under the full group generators.
        let gens = generators(GroupKind::OPlus, cat.frame(), cat.spec());
        for g in &gens {
            assert_eq!(&act(d1, g, cat.spec()), d1);
            assert_eq!(&act(d2, g, cat.spec()), d2);
        }
    }

    #[test]
    fn d_quotients_restrict_to_dickson_powers() {
        let cat = catalog(3, 2);
        let frame = cat.frame();
        let spec = cat.spec();
        let zero = Polynomial::zero(frame, spec);
        let kill_x: Vec<Polynomial> = (0..frame.len())
            .map(|pos| {
                if pos == frame.pos_x(1) || pos == frame.pos_x(2) {
                    zero.clone()
                } else {
                    Polynomial::var(frame, spec, pos)
                }
            })
            .collect();
        let y1 = Polynomial::var(frame, spec, frame.pos_y(1));
        let y2 = Polynomial::var(frame, spec, frame.pos_y(2));
        // Under the product convention used by `dickson`, the observed sign
        // is +1 for both quotients at (q, m) = (3, 2); the checker registry
        // records the sign per instance rather than assuming a pattern.
        for i in 1..=2u32 {
            let bar = cat.d(i).substitute(&kill_x);
            let dw = dickson(&[y1.clone(), y2.clone()], i).pow(3);
            assert_eq!(bar, dw, "reduction of d_{i} mod the x-ideal");
        }
    }

    #[test]
    fn u_recursion_through_the_twisted_shift() {
        let c1 = catalog(3, 1);
        let c2 = catalog(3, 2);
        let shifted = psi1(&sigma_shift(c1.u()));
        let x1 = Polynomial::var(c2.frame(), c2.spec(), c2.frame().pos_x(1));
        let rebuilt = x1.mul(c2.norm_y(1)).mul(&shifted);
        assert_eq!(&rebuilt, c2.u());
    }

    #[test]
    fn psi1_kills_u_at_two_pairs() {
        let cat = catalog(3, 2);
        assert!(psi1(cat.u()).is_zero());
    }

    #[test]
    fn block_bases_counts_and_degrees() {
        let cat = catalog(3, 2);
        let g = block_basis(&cat, BlockKind::Gamma);
        assert_eq!(g.factor_degrees, vec![0, 10, 20]);
        assert_eq!(g.hsop_degrees, vec![2, 4, 18, 24]);

        let g0 = block_basis(&cat, BlockKind::Gamma0);
        assert_eq!(g0.factor_degrees.len(), 9);
        assert_eq!(g0.factor_degrees, vec![0, 2, 4, 4, 6, 8, 8, 10, 12]);
        assert_eq!(g0.hsop_degrees, vec![9, 3, 1, 3]);

        let bh = block_basis(&cat, BlockKind::Bh);
        assert_eq!(bh.factor_degrees.len(), 9);
        assert_eq!(bh.hsop_degrees, vec![1, 3, 3, 9]);

        let bhc = block_basis(&cat, BlockKind::Bhc);
        assert_eq!(bhc.factor_degrees.len(), 9);

        let bor = block_basis(&cat, BlockKind::Htilde0);
        assert_eq!(bor.factor_degrees.len(), 36);
        assert_eq!(bor.hsop_degrees, vec![18, 6, 2, 6]);

        let cat3 = catalog(3, 3);
        let bhc3 = block_basis(&cat3, BlockKind::Bhc);
        assert_eq!(bhc3.factor_degrees.len(), 729);
        let g03 = block_basis(&cat3, BlockKind::Gamma0);
        assert_eq!(g03.factor_degrees.len(), 729);
        let g3 = block_basis(&cat3, BlockKind::Gamma);
        assert_eq!(g3.factor_degrees.len(), 27);
    }

    #[test]
    fn compliance_examples() {
        let cat = catalog(3, 2);
        assert_eq!(digit_sum(5, 3), 3);

        // y1^(q+1) needs x_1-valuation 1 on its coefficient and has 0.
        let bad = Polynomial::parse(cat.frame(), cat.spec(), "y1^4").unwrap();
        assert!(!compliance(&bad).compliant);

        let ny1 = cat.norm_y(1);
        assert!(compliance(ny1).compliant, "the top norm must be compliant");

        // x1 * N(y1) - xi_(n-2) is strongly compliant.
        let x1 = Polynomial::var(cat.frame(), cat.spec(), cat.frame().pos_x(1));
        let probe = x1.mul(ny1).sub(cat.xi(2));
        assert!(compliance(&probe).strongly_compliant);
    }

    #[test]
    fn t_operator_on_a_single_variable() {
        let frame = VarFrame::new(1).with_aux(&["u", "t"]);
        let spec = FieldSpec::prime(3).unwrap();
        let y = Polynomial::var(&frame, &spec, 0);
        let out = t_operator(&y, 0, frame.pos_aux("u"), frame.pos_aux("t"), 1);
        let expect = Polynomial::parse(&frame, &spec, "y1^3 + 2*y1*u^2").unwrap();
        assert_eq!(out, expect);
    }

    #[test]
    fn t_operator_preserves_compliance() {
        let frame = VarFrame::new(1).with_aux(&["u", "t"]);
        let spec = FieldSpec::prime(3).unwrap();
        let f = Polynomial::parse(&frame, &spec, "y1^3*t + y1^4*x1").unwrap();
        let before = compliance(&f);
        assert!(before.compliant);
        let after = compliance(&t_operator(
            &f,
            0,
            frame.pos_aux("u"),
            frame.pos_aux("t"),
            1,
        ));
        assert!(after.compliant, "averaging broke compliance");
    }

    #[test]
    fn phi_eval_basics() {
        let cat = catalog(3, 2);
        for i in 0..=3u32 {
            let t = TPolynomial::var(cat.spec(), 3, i);
            assert_eq!(&phi_eval(&cat, &t), cat.xi(i));
        }
        let expr = TPolynomial::parse(cat.spec(), 1, "T0*T1^2 + 2*T0").unwrap();
        let val = phi_eval(&cat, &expr);
        assert_eq!(
            val,
            cat.xi(0).mul(&cat.xi(1).pow(2)).add(&cat.xi(0).scale(2))
        );
    }

    #[test]
    fn generator_lists_have_the_expected_shapes() {
        let cat = catalog(3, 2);
        let syl = khovanskii_generators(&cat, GroupKind::Sylow);
        let labels: Vec<&str> = syl.iter().map(|(l, _)| l.as_str()).collect();
        assert_eq!(labels, vec!["Ny1", "Ny2", "Nx1", "Nx2", "xi0", "xi1"]);

        let hook = khovanskii_generators(&cat, GroupKind::Hook);
        let labels: Vec<&str> = hook.iter().map(|(l, _)| l.as_str()).collect();
        assert_eq!(labels, vec!["x1", "Y2", "X2", "Ny1", "xi0", "xi1"]);

        let bor = khovanskii_generators(&cat, GroupKind::Borel);
        assert_eq!(bor.len(), 3 * 2 + 2);

        let full = khovanskii_generators(&cat, GroupKind::OPlus);
        let labels: Vec<&str> = full.iter().map(|(l, _)| l.as_str()).collect();
        assert_eq!(labels, vec!["xi0", "xi1", "xi2", "d1", "d2"]);
    }

    #[test]
    fn summary_reports_built_flags() {
        let cat = catalog(5, 2);
        let before = cat.summary();
        let u_entry = before.items.iter().find(|i| i.name == "u").unwrap();
        assert_eq!(u_entry.degree, deg_u(5, 2));
        let _ = cat.xi(0);
        let after = cat.summary();
        assert!(after.items.iter().any(|i| i.name == "xi0" && i.built));
        assert_eq!(after.orbit_sizes_y, vec![25, 5]);
        let json = serde_json::to_string(&after).unwrap();
        assert!(json.contains("\"orbit_sizes_y\""));
    }
}
