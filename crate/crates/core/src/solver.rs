//! Degree-slice linear algebra over GF(p).
//!
//! A [`DegreeSlice`] indexes every monomial of one total degree so that
//! homogeneous polynomials become coordinate vectors.  On top of that sit:
//!
//! * [`invariant_dimension`] - the dimension of the degree-d subspace fixed
//!   by a generator list, by chaining the nullspaces of (g - 1) one
//!   generator at a time,
//! * [`express`] - writing a homogeneous target as a polynomial in labelled
//!   generators by enumerating generator monomials of the right degree and
//!   solving the dense linear system, with a rank certificate on failure,
//! * [`r_valuation`] - the largest v such that the target is expressible
//!   using only generator monomials of total degree >= v,
//! * [`hilbert_block`] - truncated series (sum_b t^b) * prod(1 - t^r) /
//!   prod(1 - t^h),
//! * [`variety_scan`] - brute-force common zeros over a small extension,
//! * [`jacobian_independence`] - a sampled Jacobian-determinant witness of
//!   algebraic independence.
//!
//! Everything is strictly sequential; the elimination inner loops are
//! monomorphized per modulus so the compiler can vectorize the byte
//! arithmetic.

use std::collections::HashMap;

use thiserror::Error;

use crate::gf::FieldSpec;
use crate::matgroup::{act, GroupElem};
use crate::ring::{Monomial, Polynomial, TPolynomial, VarFrame};

/// Hard caps that keep desk-scale runs honest: a degree slice may hold at
/// most this many monomials...
pub const MAX_SLICE: usize = 200_000;
/// ...a dense solve at most this many matrix entries...
pub const MAX_DENSE: u64 = 50_000_000;
/// ...and a brute-force scan at most this many points.
pub const MAX_POINTS: u64 = 10_000_000;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("degree slice of dimension {0} exceeds the cap {MAX_SLICE}")]
    SliceTooLarge(usize),
    #[error("dense system of {0} entries exceeds the cap {MAX_DENSE}")]
    SystemTooLarge(u64),
    #[error("point scan of {0} points exceeds the cap {MAX_POINTS}")]
    TooManyPoints(u64),
}

// ---------------------------------------------------------------------------
// Byte-matrix kernels, monomorphized per modulus.
// ---------------------------------------------------------------------------

fn axpy_mod<const P: u16>(dst: &mut [u8], src: &[u8], f: u16) {
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = ((*d as u16 + f * s as u16) % P) as u8;
    }
}

fn axpy(dst: &mut [u8], src: &[u8], f: u16, p: u16) {
    match p {
        3 => axpy_mod::<3>(dst, src, f),
        5 => axpy_mod::<5>(dst, src, f),
        7 => axpy_mod::<7>(dst, src, f),
        _ => axpy_mod::<251>(dst, src, f),
    }
}

fn scale_row_mod<const P: u16>(row: &mut [u8], f: u16) {
    for d in row.iter_mut() {
        *d = ((*d as u16 * f) % P) as u8;
    }
}

fn scale_row(row: &mut [u8], f: u16, p: u16) {
    match p {
        3 => scale_row_mod::<3>(row, f),
        5 => scale_row_mod::<5>(row, f),
        7 => scale_row_mod::<7>(row, f),
        _ => scale_row_mod::<251>(row, f),
    }
}

fn inv_mod(a: u16, p: u16) -> u16 {
    let mut x = 1u16;
    for _ in 0..p - 2 {
        x = (x as u32 * a as u32 % p as u32) as u16;
    }
    x
}

/// Forward Gaussian elimination on the first `ncols` columns, returning the
/// rank; afterwards rows[rank..] are zero on those columns, with any
/// augmented entries beyond `ncols` carrying the combinations that got them
/// there.  Cheaper than full reduction when only the vanished rows matter.
fn row_reduce_forward(rows: &mut [Vec<u8>], ncols: usize, p: u16) -> usize {
    let mut next = 0usize;
    for col in 0..ncols {
        let Some(pr) = (next..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(next, pr);
        let inv = inv_mod(rows[next][col] as u16, p);
        if inv != 1 {
            scale_row(&mut rows[next], inv, p);
        }
        let (head, tail) = rows.split_at_mut(next + 1);
        let pivot = &head[next];
        for row in tail.iter_mut() {
            if row[col] != 0 {
                let f = (p - row[col] as u16) % p;
                // Columns before `col` are already zero in both rows, so the
                // update can start there and then cover the augmented tail.
                axpy(&mut row[col..ncols], &pivot[col..ncols], f, p);
                axpy(&mut row[ncols..], &pivot[ncols..], f, p);
            }
        }
        next += 1;
        if next == rows.len() {
            break;
        }
    }
    next
}

/// Row-reduces `rows` in place on the first `ncols` columns, returning the
/// pivot column of each eliminated row.  Entries beyond `ncols` ride along
/// (used for augmented blocks).
fn row_reduce(rows: &mut [Vec<u8>], ncols: usize, p: u16) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut next = 0usize;
    for col in 0..ncols {
        let Some(pr) = (next..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(next, pr);
        let inv = inv_mod(rows[next][col] as u16, p);
        if inv != 1 {
            scale_row(&mut rows[next], inv, p);
        }
        let pivot_row = std::mem::take(&mut rows[next]);
        for row in rows.iter_mut() {
            // The freshly taken slot is an empty Vec, so `get` skips it.
            if row.get(col).map_or(false, |&v| v != 0) {
                let f = (p - row[col] as u16) % p;
                if f != 0 {
                    axpy(row, &pivot_row, f, p);
                }
            }
        }
        rows[next] = pivot_row;
        pivots.push(col);
        next += 1;
        if next == rows.len() {
            break;
        }
    }
    pivots
}

// ---------------------------------------------------------------------------
// Degree slices.
// ---------------------------------------------------------------------------

/// All monomials of one total degree on a frame, indexed for coordinate
/// vectors.  Keys are stored ascending, so indices follow the term order of
/// the underlying ring.
pub struct DegreeSlice {
    frame: VarFrame,
    spec: FieldSpec,
    degree: u64,
    keys: Vec<u64>,
    index: HashMap<u64, u32>,
}

impl DegreeSlice {
    pub fn new(frame: &VarFrame, spec: &FieldSpec, degree: u64) -> Result<DegreeSlice, SolverError> {
        fn walk(
            pos: usize,
            remaining: u64,
            maxe: u64,
            exps: &mut Vec<u32>,
            frame: &VarFrame,
            keys: &mut Vec<u64>,
        ) {
            if pos + 1 == exps.len() {
                if remaining <= maxe {
                    exps[pos] = remaining as u32;
                    keys.push(frame.pack_slice(exps));
                    exps[pos] = 0;
                }
                return;
            }
            for e in 0..=remaining.min(maxe) {
                exps[pos] = e as u32;
                walk(pos + 1, remaining - e, maxe, exps, frame, keys);
            }
            exps[pos] = 0;
        }
        let mut keys = Vec::new();
        let mut exps = vec![0u32; frame.len()];
        walk(0, degree, frame.max_exponent() as u64, &mut exps, frame, &mut keys);
        keys.sort_unstable();
        if keys.len() > MAX_SLICE {
            return Err(SolverError::SliceTooLarge(keys.len()));
        }
        let index = keys
            .iter()
            .enumerate()
            .map(|(i, &k)| (k, i as u32))
            .collect();
        Ok(DegreeSlice {
            frame: frame.clone(),
            spec: spec.clone(),
            degree,
            keys,
            index,
        })
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.keys.len()
    }

    pub fn monomial(&self, i: usize) -> Monomial {
        self.frame.unpack(self.keys[i])
    }

    /// Coordinates of a polynomial whose support lies in this slice.
    pub fn coords(&self, f: &Polynomial) -> Vec<u8> {
        let mut v = vec![0u8; self.keys.len()];
        for &(k, c) in f.packed_terms() {
            let idx = *self
                .index
                .get(&k)
                .unwrap_or_else(|| panic!("term outside the degree-{} slice", self.degree));
            v[idx as usize] = c as u8;
        }
        v
    }

    /// Rebuilds the polynomial with the given coordinates.
    pub fn poly_from_coords(&self, coords: &[u8]) -> Polynomial {
        let raw: Vec<(u64, u16)> = coords
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (self.keys[i], c as u16))
            .collect();
        Polynomial::from_raw_terms(&self.frame, &self.spec, raw)
    }
}

// ---------------------------------------------------------------------------
// Invariant dimensions.
// ---------------------------------------------------------------------------

/// Dimension of the space of degree-d forms fixed by every generator.  The
/// candidate subspace is narrowed one generator at a time: writing the
/// current basis as rows b_j, the fixed vectors of g are the left nullspace
/// of the matrix with rows act(b_j, g) - b_j, read off from an augmented
/// identity block.
pub fn invariant_dimension(
    frame: &VarFrame,
    spec: &FieldSpec,
    gens: &[GroupElem],
    degree: u64,
) -> Result<usize, SolverError> {
    let slice = DegreeSlice::new(frame, spec, degree)?;
    let dim = slice.dim();
    if dim == 0 {
        return Ok(0);
    }
    let p = spec.p() as u16;
    let mut basis: Vec<Vec<u8>> = (0..dim)
        .map(|i| {
            let mut row = vec![0u8; dim];
            row[i] = 1;
            row
        })
        .collect();
    for g in gens {
        if basis.is_empty() {
            break;
        }
        let cur = basis.len();
        let mut rel: Vec<Vec<u8>> = Vec::with_capacity(cur);
        for (j, b) in basis.iter().enumerate() {
            let poly = slice.poly_from_coords(b);
            let moved = act(&poly, g, spec);
            let mut row = slice.coords(&moved);
            for (r, &x) in row.iter_mut().zip(b.iter()) {
                *r = ((*r as u16 + (p - x as u16)) % p) as u8;
            }
            row.resize(dim + cur, 0);
            row[dim + j] = 1;
            rel.push(row);
        }
        let rank = row_reduce_forward(&mut rel, dim, p);
        let mut next: Vec<Vec<u8>> = Vec::with_capacity(cur - rank);
        for row in &rel[rank..] {
            debug_assert!(row[..dim].iter().all(|&v| v == 0));
            let mut acc = vec![0u8; dim];
            for (j, &c) in row[dim..].iter().enumerate() {
                if c != 0 {
                    axpy(&mut acc, &basis[j], c as u16, p);
                }
            }
            next.push(acc);
        }
        basis = next;
    }
    Ok(basis.len())
}

/// [`invariant_dimension`] over every degree 0..=max_degree.
pub fn invariant_series(
    frame: &VarFrame,
    spec: &FieldSpec,
    gens: &[GroupElem],
    max_degree: u64,
) -> Result<Vec<usize>, SolverError> {
    (0..=max_degree)
        .map(|d| invariant_dimension(frame, spec, gens, d))
        .collect()
}

// ---------------------------------------------------------------------------
// Expressing a target over labelled generators.
// ---------------------------------------------------------------------------

/// Outcome of [`express`]: on success, the exponent tuples (in generator
/// order) with their coefficients; always, the rank data of the solve.
#[derive(Debug, Clone)]
pub struct ExpressOutcome {
    pub solution: Option<Vec<(Vec<u32>, u16)>>,
    /// Rank of the generator-monomial column space.
    pub rank: usize,
    /// Number of enumerated generator monomials.
    pub columns: usize,
    /// Number of distinct monomials spanned by the columns and the target.
    pub support: usize,
}

impl ExpressOutcome {
    /// Renders a solution over the generator labels, e.g. "2*xi0^3*d1".
    pub fn render(&self, labels: &[String]) -> Option<String> {
        let sol = self.solution.as_ref()?;
        if sol.is_empty() {
            return Some("0".to_string());
        }
        let parts: Vec<String> = sol
            .iter()
            .map(|(exps, c)| {
                let mut factors = Vec::new();
                if *c != 1 || exps.iter().all(|&e| e == 0) {
                    factors.push(format!("{c}"));
                }
                for (i, &e) in exps.iter().enumerate() {
                    if e == 1 {
                        factors.push(labels[i].clone());
                    } else if e > 1 {
                        factors.push(format!("{}^{}", labels[i], e));
                    }
                }
                factors.join("*")
            })
            .collect();
        Some(parts.join(" + "))
    }

    /// Reads a solution over the first k+1 generators as a polynomial in
    /// T_0..T_k (generator i standing for T_i).
    pub fn as_t_polynomial(&self, spec: &FieldSpec, k: u32) -> Option<TPolynomial> {
        let sol = self.solution.as_ref()?;
        let mut out = TPolynomial::zero(spec, k);
        for (exps, c) in sol {
            let mut padded = vec![0u32; (k + 1) as usize];
            padded[..exps.len()].copy_from_slice(exps);
            out.add_term_logical(&padded, *c);
        }
        Some(out)
    }

    /// Minimum total exponent degree over the solution's tuples.
    pub fn min_total_degree(&self) -> Option<u64> {
        let sol = self.solution.as_ref()?;
        sol.iter()
            .map(|(e, _)| e.iter().map(|&x| x as u64).sum::<u64>())
            .min()
    }
}

/// Writes the homogeneous target as a linear combination of monomials in the
/// generators, if possible.  Exponents are bounded by `caps` (defaulting to
/// target degree / generator degree) and the weighted degree of every
/// enumerated monomial matches the target's.
pub fn express(
    f: &Polynomial,
    gens: &[(String, Polynomial)],
    caps: Option<&[u32]>,
) -> Result<ExpressOutcome, SolverError> {
    express_filtered(f, gens, caps, &|_| true)
}

/// [`express`] restricted to generator monomials whose exponent tuple passes
/// `keep`.
pub fn express_filtered(
    f: &Polynomial,
    gens: &[(String, Polynomial)],
    caps: Option<&[u32]>,
    keep: &dyn Fn(&[u32]) -> bool,
) -> Result<ExpressOutcome, SolverError> {
    let target_deg = f
        .homogeneous_degree()
        .expect("express needs a homogeneous nonzero target");
    let spec = f.spec().clone();
    let p = spec.p() as u16;
    let gdegs: Vec<u64> = gens
        .iter()
        .map(|(_, g)| {
            g.homogeneous_degree()
                .expect("express needs homogeneous nonzero generators")
        })
        .collect();
    let caps: Vec<u32> = match caps {
        Some(c) => {
            assert_eq!(c.len(), gens.len());
            c.to_vec()
        }
        None => gdegs.iter().map(|&d| (target_deg / d) as u32).collect(),
    };

    // Degrees reachable by each generator suffix, for pruning the search.
    let nd = target_deg as usize + 1;
    let mut reach = vec![vec![false; nd]; gens.len() + 1];
    reach[gens.len()][0] = true;
    for i in (0..gens.len()).rev() {
        for d in 0..nd {
            if reach[i + 1][d] {
                for e in 0..=caps[i] as u64 {
                    let t = d as u64 + e * gdegs[i];
                    if t >= nd as u64 {
                        break;
                    }
                    reach[i][t as usize] = true;
                }
            }
        }
    }

    let mut support: HashMap<u64, u32> = HashMap::new();
    for &(k, _) in f.packed_terms() {
        let next = support.len() as u32;
        support.entry(k).or_insert(next);
    }
    let mut columns: Vec<(Vec<u32>, Vec<(u32, u8)>)> = Vec::new();

    // Depth-first enumeration of exponent tuples, sharing prefix products.
    struct Ctx<'a> {
        gens: &'a [(String, Polynomial)],
        gdegs: &'a [u64],
        caps: &'a [u32],
        reach: &'a [Vec<bool>],
        keep: &'a dyn Fn(&[u32]) -> bool,
        support: &'a mut HashMap<u64, u32>,
        columns: &'a mut Vec<(Vec<u32>, Vec<(u32, u8)>)>,
    }
    fn descend(ctx: &mut Ctx, i: usize, remaining: u64, exps: &mut Vec<u32>, prod: &Polynomial) {
        if i == ctx.gens.len() {
            debug_assert_eq!(remaining, 0);
            if !(ctx.keep)(exps) {
                return;
            }
            let mut col = Vec::with_capacity(prod.num_terms());
            for &(k, c) in prod.packed_terms() {
                let next = ctx.support.len() as u32;
                let idx = *ctx.support.entry(k).or_insert(next);
                col.push((idx, c as u8));
            }
            ctx.columns.push((exps.clone(), col));
            return;
        }
        let mut power = prod.clone();
        for e in 0..=ctx.caps[i] {
            let used = e as u64 * ctx.gdegs[i];
            if used > remaining {
                break;
            }
            if e > 0 {
                power = power.mul(&ctx.gens[i].1);
            }
            let rest = remaining - used;
            if ctx.reach[i + 1][rest as usize] {
                exps.push(e);
                descend(ctx, i + 1, rest, exps, &power);
                exps.pop();
            }
        }
    }
    if reach[0][target_deg as usize] {
        let one = Polynomial::one(f.frame(), &spec);
        let mut ctx = Ctx {
            gens,
            gdegs: &gdegs,
            caps: &caps,
            reach: &reach,
            keep,
            support: &mut support,
            columns: &mut columns,
        };
        descend(&mut ctx, 0, target_deg, &mut Vec::new(), &one);
    }

    let nrows = support.len();
    let ncols = columns.len();
    let entries = (nrows as u64) * (ncols as u64 + 1);
    if entries > MAX_DENSE {
        return Err(SolverError::SystemTooLarge(entries));
    }

    // Dense augmented system [A | b], one row per support monomial.
    let mut rows: Vec<Vec<u8>> = vec![vec![0u8; ncols + 1]; nrows];
    for (j, (_, col)) in columns.iter().enumerate() {
        for &(ridx, c) in col {
            rows[ridx as usize][j] = c;
        }
    }
    for &(k, c) in f.packed_terms() {
        rows[support[&k] as usize][ncols] = c as u8;
    }
    let pivots = row_reduce(&mut rows, ncols, p);
    let rank = pivots.len();
    let inconsistent = rows
        .iter()
        .any(|row| row[..ncols].iter().all(|&v| v == 0) && row[ncols] != 0);
    let solution = if inconsistent {
        None
    } else {
        let mut sol = Vec::new();
        for (r, &col) in pivots.iter().enumerate() {
            let c = rows[r][ncols];
            if c != 0 {
                sol.push((columns[col].0.clone(), c as u16));
            }
        }
        Some(sol)
    };
    Ok(ExpressOutcome {
        solution,
        rank,
        columns: ncols,
        support: nrows,
    })
}

/// The largest v such that `f` is expressible over the generators using only
/// generator monomials of total exponent degree >= v.  None if `f` is not
/// expressible at all.  When the generators are algebraically independent
/// the representation is unique and this is simply its minimum total degree;
/// the climb loop matters only for dependent generator lists.
pub fn r_valuation(
    f: &Polynomial,
    gens: &[(String, Polynomial)],
    caps: Option<&[u32]>,
) -> Result<Option<u64>, SolverError> {
    let base = express(f, gens, caps)?;
    if base.solution.is_none() {
        return Ok(None);
    }
    let mut best = base.min_total_degree().expect("nonzero target");
    loop {
        let floor = best + 1;
        let raised = express_filtered(f, gens, caps, &|exps: &[u32]| {
            exps.iter().map(|&e| e as u64).sum::<u64>() >= floor
        })?;
        match raised.min_total_degree() {
            Some(v) => best = v,
            None => return Ok(Some(best)),
        }
    }
}

// ---------------------------------------------------------------------------
// Hilbert series blocks.
// ---------------------------------------------------------------------------

/// Truncated coefficients of
/// (sum over factor_degrees of t^b) * prod over relation_degrees of (1-t^r)
/// / prod over hsop_degrees of (1-t^h), up to max_degree inclusive.
pub fn hilbert_block(
    factor_degrees: &[u64],
    hsop_degrees: &[u64],
    relation_degrees: &[u64],
    max_degree: usize,
) -> Vec<i64> {
    let nd = max_degree + 1;
    let mut out = vec![0i64; nd];
    for &b in factor_degrees {
        if (b as usize) < nd {
            out[b as usize] += 1;
        }
    }
    for &r in relation_degrees {
        let r = r as usize;
        assert!(r > 0, "relation degree must be positive");
        for d in (r..nd).rev() {
            out[d] -= out[d - r];
        }
    }
    for &h in hsop_degrees {
        let h = h as usize;
        assert!(h > 0, "hsop degree must be positive");
        for d in h..nd {
            out[d] += out[d - h];
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Point scans.
// ---------------------------------------------------------------------------

/// All common zeros of the polynomials over GF(q^ext), as raw coordinate
/// vectors in frame position order.  Guarded by [`MAX_POINTS`].
pub fn variety_scan(polys: &[Polynomial], ext: u32) -> Result<Vec<Vec<u16>>, SolverError> {
    assert!(!polys.is_empty());
    let frame = polys[0].frame().clone();
    let base = polys[0].spec().clone();
    let point_spec = if ext == 1 {
        base.clone()
    } else {
        FieldSpec::new(base.p() as u64, ext).expect("extension field")
    };
    let n = frame.len();
    let qe = point_spec.q() as u64;
    let total = qe.checked_pow(n as u32).unwrap_or(u64::MAX);
    if total > MAX_POINTS {
        return Err(SolverError::TooManyPoints(total));
    }
    let elems: Vec<u16> = point_spec.raw_elems().collect();
    let mut zeros = Vec::new();
    let mut point = vec![0usize; n];
    'points: loop {
        let coords: Vec<u16> = point.iter().map(|&i| elems[i]).collect();
        if polys.iter().all(|f| f.eval_raw(&coords, &point_spec) == 0) {
            zeros.push(coords);
        }
        let mut pos = 0;
        loop {
            if pos == n {
                break 'points;
            }
            point[pos] += 1;
            if point[pos] < elems.len() {
                break;
            }
            point[pos] = 0;
            pos += 1;
        }
    }
    Ok(zeros)
}

// ---------------------------------------------------------------------------
// Derivatives and Jacobian sampling.
// ---------------------------------------------------------------------------

/// Partial derivative with respect to the variable at `pos`.
pub fn derivative(f: &Polynomial, pos: usize) -> Polynomial {
    let frame = f.frame().clone();
    let spec = f.spec().clone();
    let p = spec.p() as u64;
    let mut out = Polynomial::zero(&frame, &spec);
    for (mono, c) in f.terms() {
        let e = mono.exps()[pos];
        if e == 0 || e as u64 % p == 0 {
            continue;
        }
        let mut exps = mono.exps().to_vec();
        exps[pos] = e - 1;
        let coeff = spec.mul_raw(c, spec.raw_from_int((e as u64 % p) as i64));
        out.add_term(Monomial::from_exps(&exps), coeff);
    }
    out
}

/// Searches for a point over GF(q^ext) where the Jacobian determinant of the
/// family is nonzero; such a point certifies algebraic independence in
/// characteristic p (the converse direction is not decided by sampling).
/// Small point cubes are swept exhaustively; larger ones by a deterministic
/// pseudorandom walk of `sample_budget` points.  Returns the witness point,
/// or None if no sampled point worked (inconclusive).
pub fn jacobian_independence(
    polys: &[Polynomial],
    ext: u32,
    sample_budget: u64,
) -> Option<Vec<u16>> {
    assert!(!polys.is_empty());
    let frame = polys[0].frame().clone();
    let base = polys[0].spec().clone();
    let n = frame.len();
    assert_eq!(polys.len(), n, "need as many polynomials as variables");
    let point_spec = if ext == 1 {
        base.clone()
    } else {
        FieldSpec::new(base.p() as u64, ext).expect("extension field")
    };
    let partials: Vec<Vec<Polynomial>> = polys
        .iter()
        .map(|f| (0..n).map(|j| derivative(f, j)).collect())
        .collect();
    let elems: Vec<u16> = point_spec.raw_elems().collect();
    let qe = elems.len() as u64;
    let total = qe.checked_pow(n as u32).unwrap_or(u64::MAX);
    let check = |coords: &[u16]| -> bool {
        let mat: Vec<Vec<u16>> = partials
            .iter()
            .map(|row| {
                row.iter()
                    .map(|df| df.eval_raw(coords, &point_spec))
                    .collect()
            })
            .collect();
        det_raw(&mat, &point_spec) != 0
    };
    if total <= sample_budget {
        let mut point = vec![0usize; n];
        loop {
            let coords: Vec<u16> = point.iter().map(|&i| elems[i]).collect();
            if check(&coords) {
                return Some(coords);
            }
            let mut pos = 0;
            loop {
                if pos == n {
                    return None;
                }
                point[pos] += 1;
                if point[pos] < elems.len() {
                    break;
                }
                point[pos] = 0;
                pos += 1;
            }
        }
    }
    let mut state = 0x9e37_79b9_7f4a_7c15u64;
    for _ in 0..sample_budget {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        let mut idx = state;
        let coords: Vec<u16> = (0..n)
            .map(|_| {
                let c = elems[(idx % qe) as usize];
                idx /= qe;
                c
            })
            .collect();
        if check(&coords) {
            return Some(coords);
        }
    }
    None
}

fn det_raw(mat: &[Vec<u16>], spec: &FieldSpec) -> u16 {
    let n = mat.len();
    let mut m: Vec<Vec<u16>> = mat.to_vec();
    let mut det = spec.raw_from_int(1);
    for col in 0..n {
        let Some(pr) = (col..n).find(|&r| m[r][col] != 0) else {
            return 0;
        };
        if pr != col {
            m.swap(col, pr);
            det = spec.neg_raw(det);
        }
        det = spec.mul_raw(det, m[col][col]);
        let inv = spec.inv_raw(m[col][col]);
        for r in col + 1..n {
            if m[r][col] != 0 {
                let f = spec.mul_raw(m[r][col], inv);
                for c in col..n {
                    let s = spec.mul_raw(f, m[col][c]);
                    m[r][c] = spec.sub_raw(m[r][c], s);
                }
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::{self, catalog};
    use crate::matgroup::{generators, GroupKind};

    #[test]
    fn slice_dimensions_match_the_stars_and_bars_count() {
        let frame = VarFrame::new(2);
        let spec = FieldSpec::prime(3).unwrap();
        for d in 0..6u64 {
            let slice = DegreeSlice::new(&frame, &spec, d).unwrap();
            let expect = ((d + 1) * (d + 2) * (d + 3) / 6) as usize;
            assert_eq!(slice.dim(), expect, "slice dimension at degree {d}");
        }
        let slice = DegreeSlice::new(&frame, &spec, 4).unwrap();
        let f = Polynomial::parse(&frame, &spec, "y1^2*x1^2 + 2*y2^4").unwrap();
        let coords = slice.coords(&f);
        assert_eq!(coords.iter().filter(|&&c| c != 0).count(), 2);
        assert_eq!(slice.poly_from_coords(&coords), f);
    }

    #[test]
    fn full_group_dimensions_match_the_block_series() {
        let cat = catalog(3, 2);
        let gens = generators(GroupKind::OPlus, cat.frame(), cat.spec());
        let dims = invariant_series(cat.frame(), cat.spec(), &gens, 10).unwrap();
        assert_eq!(dims, vec![1, 0, 1, 0, 2, 0, 2, 0, 3, 0, 4]);
        let series = hilbert_block(&[0, 10, 20], &[2, 4, 18, 24], &[], 10);
        let series_usize: Vec<usize> = series.iter().map(|&c| c as usize).collect();
        assert_eq!(dims, series_usize);
    }

    #[test]
    fn sylow_dimensions_match_the_norm_block_series() {
        let cat = catalog(3, 2);
        let gens = generators(GroupKind::Sylow, cat.frame(), cat.spec());
        let dims = invariant_series(cat.frame(), cat.spec(), &gens, 8).unwrap();
        let block = invariants::block_basis(&cat, invariants::BlockKind::Gamma0);
        let series = hilbert_block(&block.factor_degrees, &block.hsop_degrees, &[], 8);
        let series_usize: Vec<usize> = series.iter().map(|&c| c as usize).collect();
        assert_eq!(dims, series_usize);
    }

    #[test]
    fn express_recovers_the_t_side_expression_of_u() {
        let cat = catalog(3, 2);
        let gens: Vec<(String, Polynomial)> = (0..=2u32)
            .map(|i| (format!("xi{i}"), cat.xi(i).clone()))
            .collect();
        let outcome = express(cat.u(), &gens, None).unwrap();
        let t = outcome.as_t_polynomial(cat.spec(), 2).unwrap();
        let expect =
            TPolynomial::parse(cat.spec(), 2, "T0^3*T2 + T0^4*T1^2 + T0^8 + 2*T1^4").unwrap();
        assert_eq!(t, expect);
    }

    #[test]
    fn express_reports_rank_on_failure() {
        let frame = VarFrame::new(1);
        let spec = FieldSpec::prime(3).unwrap();
        let y = Polynomial::var(&frame, &spec, 0);
        let xi0 = invariants::xi_poly(&frame, &spec, 0);
        let out = express(&y.pow(2), &[("xi0".into(), xi0)], None).unwrap();
        assert!(out.solution.is_none());
        assert_eq!(out.columns, 1);
        assert_eq!(out.rank, 1);
        assert!(out.support >= 2);
    }

    #[test]
    fn valuation_search_finds_the_deep_representation() {
        let cat = catalog(3, 2);
        let gens: Vec<(String, Polynomial)> = (0..=2u32)
            .map(|i| (format!("xi{i}"), cat.xi(i).clone()))
            .collect();
        let texpr = TPolynomial::parse(cat.spec(), 2, "T2^2 + 2*T0*T1^2*T2").unwrap();
        let f = invariants::phi_eval(&cat, &texpr);
        assert_eq!(r_valuation(&f, &gens, None).unwrap(), Some(2));
        assert_eq!(r_valuation(cat.u(), &gens, None).unwrap(), Some(4));
    }

    #[test]
    fn hilbert_block_handles_relation_factors() {
        assert_eq!(
            hilbert_block(&[0], &[2, 4], &[], 8),
            vec![1, 0, 1, 0, 2, 0, 2, 0, 3]
        );
        assert_eq!(
            hilbert_block(&[0], &[2, 4], &[4], 8),
            vec![1, 0, 1, 0, 1, 0, 1, 0, 1]
        );
        assert_eq!(hilbert_block(&[0, 3], &[1], &[], 4), vec![1, 1, 1, 2, 2]);
    }

    #[test]
    fn variety_scan_counts_the_quadric_points() {
        let frame = VarFrame::new(1);
        let spec = FieldSpec::prime(3).unwrap();
        let xi0 = invariants::xi_poly(&frame, &spec, 0);
        let zeros = variety_scan(&[xi0.clone()], 1).unwrap();
        assert_eq!(zeros.len(), 5, "y*x = 0 over GF(3)");
        let zeros9 = variety_scan(&[xi0], 2).unwrap();
        assert_eq!(zeros9.len(), 17, "y*x = 0 over GF(9)");
    }

    #[test]
    fn derivative_respects_the_characteristic() {
        let frame = VarFrame::new(1);
        let spec = FieldSpec::prime(3).unwrap();
        let f = Polynomial::parse(&frame, &spec, "y1^3 + y1^2*x1").unwrap();
        let df = derivative(&f, 0);
        assert_eq!(df, Polynomial::parse(&frame, &spec, "2*y1*x1").unwrap());
    }

    #[test]
    fn jacobian_sampling_separates_free_families_from_dependent_ones() {
        let frame = VarFrame::new(1);
        let spec = FieldSpec::prime(3).unwrap();
        let xi0 = invariants::xi_poly(&frame, &spec, 0);
        let xi1 = invariants::xi_poly(&frame, &spec, 1);
        // Over GF(3) the determinant y*x*(y^2 - x^2) vanishes everywhere, so
        // the witness needs the quadratic extension.
        assert!(jacobian_independence(&[xi0.clone(), xi1], 2, 200).is_some());
        assert!(jacobian_independence(&[xi0.clone(), xi0.pow(2)], 2, 200).is_none());
    }
}
