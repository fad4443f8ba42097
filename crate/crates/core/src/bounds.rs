//! Exact cardinality bounds for codes over partially stuck cells, and a
//! greedy Gilbert-Varshamov style construction of codes containing the
//! all-one word.
//!
//! All counting is done with arbitrary-precision integers. The only floating
//! point value is `k_info`, the base-`q` logarithm of the cardinality bound.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::channel::ErrorModel;
use crate::code::{for_each_subset, LinearCode, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::psmc::AllOneMaskingCode;

/// A sphere-packing query: `n` cells over an alphabet of size `q`, one level
/// per stuck cell, `t` errors under the given model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundQuery {
    pub n: usize,
    pub q: u32,
    pub levels: Vec<u32>,
    pub t: usize,
    pub model: ErrorModel,
}

impl BoundQuery {
    /// `u` stuck cells all at level `s`.
    pub fn uniform(n: usize, q: u32, u: usize, t: usize, s: u32, model: ErrorModel) -> BoundQuery {
        BoundQuery {
            n,
            q,
            levels: vec![s; u],
            t,
            model,
        }
    }

    pub fn u(&self) -> usize {
        self.levels.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.q < 2 {
            return Err(Error::InvalidBoundQuery(format!(
                "alphabet size {} < 2",
                self.q
            )));
        }
        if self.u() > self.n || self.t > self.n {
            return Err(Error::InvalidBoundQuery(format!(
                "u = {} and t = {} must not exceed n = {}",
                self.u(),
                self.t,
                self.n
            )));
        }
        for &s in &self.levels {
            if s == 0 || s >= self.q {
                return Err(Error::InvalidBoundQuery(format!(
                    "level {s} outside [1, {}]",
                    self.q - 1
                )));
            }
            if self.model == ErrorModel::Overlapping && s + 1 >= self.q {
                return Err(Error::InvalidBoundQuery(format!(
                    "overlapping errors need every level below q - 1 = {}, got {s}",
                    self.q - 1
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundResult {
    /// Number of admissible words within distance `t` of a fixed word.
    pub sphere_size: BigUint,
    /// Number of words respecting the stuck levels.
    pub rhs: BigUint,
    /// `⌊rhs / sphere_size⌋`.
    pub max_cardinality: BigUint,
    /// `log_q(max_cardinality)`, `-inf` when the bound is zero.
    pub k_info: f64,
}

impl BoundResult {
    fn new(sphere_size: BigUint, rhs: BigUint, q: u32) -> BoundResult {
        let max_cardinality = &rhs / &sphere_size;
        let k_info = log_base(&max_cardinality, q);
        BoundResult {
            sphere_size,
            rhs,
            max_cardinality,
            k_info,
        }
    }
}

/// Natural-log based `log_q(x)` that survives values beyond `f64` range.
pub fn log_base(x: &BigUint, q: u32) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    let ln = if bits <= 1000 {
        x.to_f64().expect("fits in f64").ln()
    } else {
        let shift = bits - 64;
        let top = (x >> shift).to_f64().expect("64-bit value");
        top.ln() + shift as f64 * std::f64::consts::LN_2
    };
    ln / f64::from(q).ln()
}

/// Formats with 12 significant digits, dropping trailing zeros.
pub fn format_k_info(x: f64) -> String {
    if x.is_infinite() {
        return if x < 0.0 { "-inf".into() } else { "inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

impl fmt::Display for BoundResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "sphere {} rhs {} max {} k {}",
            self.sphere_size,
            self.rhs,
            self.max_cardinality,
            format_k_info(self.k_info)
        )
    }
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

fn big_pow(base: u32, exp: usize) -> BigUint {
    num_traits::pow(BigUint::from(base), exp)
}

/// `q^(n-u) · Π (q - s_i)`: words that respect every stuck level.
pub fn masking_only_bound(n: usize, q: u32, levels: &[u32]) -> BigUint {
    let mut acc = big_pow(q, n - levels.len());
    for &s in levels {
        acc *= q - s;
    }
    acc
}

/// `Σ_{j≤t} C(n-u, j)(q-1)^j`: errors confined to the healthy cells.
pub fn sphere_non_overlapping(n: usize, q: u32, u: usize, t: usize) -> BigUint {
    (0..=t)
        .map(|j| binomial(n - u, j) * big_pow(q - 1, j))
        .sum()
}

/// `e_0 .. e_top` of the multiset `values`.
fn elementary_symmetric(values: &[u32], top: usize) -> Vec<BigUint> {
    let mut e = vec![BigUint::zero(); top + 1];
    e[0] = BigUint::one();
    for (seen, &v) in values.iter().enumerate() {
        for m in (1..=top.min(seen + 1)).rev() {
            let add = &e[m - 1] * v;
            e[m] += add;
        }
    }
    e
}

/// Errors may also hit stuck cells, where a cell at level `s` offers
/// `q - 1 - s` nonzero admissible displacements. The weight on stuck cells
/// is the elementary symmetric polynomial of those counts; for a uniform
/// level it reduces to `C(u, m)(q-1-s)^m`.
pub fn sphere_overlapping(n: usize, q: u32, levels: &[u32], t: usize) -> BigUint {
    let u = levels.len();
    let stuck: Vec<BigUint> = match levels.first() {
        Some(&s) if levels.iter().all(|&x| x == s) => (0..=t)
            .map(|m| binomial(u, m) * big_pow(q - 1 - s, m))
            .collect(),
        _ => {
            let counts: Vec<u32> = levels.iter().map(|&s| q - 1 - s).collect();
            elementary_symmetric(&counts, t)
        }
    };
    let mut total = BigUint::zero();
    for j in 0..=t {
        for j1 in 0..=j {
            let healthy = binomial(n - u, j1) * big_pow(q - 1, j1);
            total += healthy * &stuck[j - j1];
        }
    }
    total
}

pub fn sp_non_overlapping(query: &BoundQuery) -> Result<BoundResult> {
    if query.model != ErrorModel::NonOverlapping {
        return Err(Error::InvalidBoundQuery(
            "query uses the overlapping model".into(),
        ));
    }
    evaluate(query)
}

pub fn sp_overlapping(query: &BoundQuery) -> Result<BoundResult> {
    if query.model != ErrorModel::Overlapping {
        return Err(Error::InvalidBoundQuery(
            "query uses the non-overlapping model".into(),
        ));
    }
    evaluate(query)
}

/// Sphere-packing bound for the query's error model.
pub fn evaluate(query: &BoundQuery) -> Result<BoundResult> {
    query.validate()?;
    let BoundQuery { n, q, t, .. } = *query;
    let sphere = match query.model {
        ErrorModel::NonOverlapping => sphere_non_overlapping(n, q, query.u(), t),
        ErrorModel::Overlapping => sphere_overlapping(n, q, &query.levels, t),
    };
    let rhs = masking_only_bound(n, q, &query.levels);
    Ok(BoundResult::new(sphere, rhs, q))
}

/// Classical Hamming bound `q^n / Σ_{j≤t} C(n, j)(q-1)^j`.
pub fn hamming_bound(n: usize, q: u32, t: usize) -> Result<BoundResult> {
    evaluate(&BoundQuery::uniform(
        n,
        q,
        0,
        t,
        1,
        ErrorModel::NonOverlapping,
    ))
}

/// `Σ_{i=0}^{d-2} C(n-1, i)(q-1)^i < q^(n-k)`; the sum is empty for `d = 1`.
pub fn gv_check(n: usize, k: usize, d: usize, q: u32) -> Result<bool> {
    if q < 2 || k < 1 || k > n || d < 1 || d > n {
        return Err(Error::InvalidBoundQuery(format!(
            "GV check needs 1 <= k <= n, 1 <= d <= n, q >= 2 (got n={n}, k={k}, d={d}, q={q})"
        )));
    }
    let lhs: BigUint = (0..d.saturating_sub(1))
        .map(|i| binomial(n - 1, i) * big_pow(q - 1, i))
        .sum();
    Ok(lhs < big_pow(q, n - k))
}

/// Largest `d >= 2` with `gv_check(n_f - 1, k_f + d - 2, d, q)`, or 1 when
/// no such `d` exists.
pub fn gv_max_d(n_f: usize, k_f: usize, q: u32) -> Result<usize> {
    if k_f < 1 || k_f > n_f || q < 2 {
        return Err(Error::InvalidBoundQuery(format!(
            "need 1 <= k_f <= n_f and q >= 2 (got n_f={n_f}, k_f={k_f}, q={q})"
        )));
    }
    let n = n_f - 1;
    let mut best = 1;
    for d in 2..=n {
        let k = k_f + d - 2;
        if k > n || !gv_check(n, k, d, q)? {
            break;
        }
        best = d;
    }
    Ok(best)
}

/// Output of [`gv_construct`].
#[derive(Clone, Debug)]
pub struct GvConstruction {
    /// Parity-check matrix with `n - k` rows and `n′` columns.
    pub h: Matrix,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub n_prime: usize,
    pub rank: usize,
    /// `n′ - rank(H)`.
    pub k_prime: usize,
    /// Whether the parity column was appended (otherwise it was absorbed).
    pub parity_appended: bool,
    /// Columns (in the pre-parity ordering) scaled by `1 + a_j`.
    pub scaled: Vec<usize>,
    /// Columns dropped because their coefficient was `q - 1`.
    pub dropped: Vec<usize>,
}

/// Column vectors of length `rows` over GF(q) packed as base-`q` integers
/// with row 0 most significant, so integer order is lexicographic order.
struct Packing {
    field: Field,
    rows: usize,
}

impl Packing {
    fn pack(&self, col: &[u32]) -> u64 {
        let q = u64::from(self.field.order());
        col.iter().fold(0u64, |acc, &x| acc * q + u64::from(x))
    }

    fn unpack(&self, mut key: u64) -> Vec<u32> {
        let q = u64::from(self.field.order());
        let mut col = vec![0u32; self.rows];
        for slot in col.iter_mut().rev() {
            *slot = (key % q) as u32;
            key /= q;
        }
        col
    }

    fn combine(&self, a: u64, b: &[u32], scale: u32) -> u64 {
        let f = &self.field;
        let x = self.unpack(a);
        let y: Vec<u32> = x
            .iter()
            .zip(b)
            .map(|(&xi, &bi)| f.add(xi, f.mul(scale, bi)))
            .collect();
        self.pack(&y)
    }
}

/// Greedy parity-check construction of a code containing the all-one word.
///
/// Starting from `I_{n-k}`, columns are appended in lexicographic order as
/// long as they are not a combination of at most `d - 2` existing columns,
/// until there are `n`. The column `p = -Σ h_i` then forces every row sum
/// to zero: either it is appended, or, when it is itself a combination
/// `Σ a_j h_{i_j}` of at most `d - 2` columns, each such column is scaled by
/// `1 + a_j` (dropped when that is zero) and `p` is discarded.
pub fn gv_construct(n: usize, k: usize, d: usize, q: u32) -> Result<GvConstruction> {
    gv_construct_with_budget(n, k, d, q, DEFAULT_BUDGET)
}

pub fn gv_construct_with_budget(
    n: usize,
    k: usize,
    d: usize,
    q: u32,
    budget: u64,
) -> Result<GvConstruction> {
    if !gv_check(n, k, d, q)? {
        return Err(Error::InvalidBoundQuery(format!(
            "GV inequality fails for n={n}, k={k}, d={d}, q={q}"
        )));
    }
    let field = Field::of_order(q)?;
    let rows = n - k;
    if rows == 0 {
        // Only d = 1 passes here: the full space of length n + 1.
        let h = Matrix::zeros(&field, 0, n + 1);
        return Ok(GvConstruction {
            h,
            n,
            k,
            d,
            n_prime: n + 1,
            rank: 0,
            k_prime: n + 1,
            parity_appended: true,
            scaled: Vec::new(),
            dropped: Vec::new(),
        });
    }
    let space = u64::from(q)
        .checked_pow(rows as u32)
        .filter(|&s| s <= budget)
        .ok_or(Error::BudgetExceeded {
            needed: format!("{q}^{rows}"),
            budget,
            hint: "; the greedy construction enumerates all columns of length n-k",
        })?;
    let pack = Packing {
        field: field.clone(),
        rows,
    };
    let depth = d.saturating_sub(2);

    // reach[i]: packed sums of at most i columns with nonzero coefficients.
    let mut reach: Vec<HashSet<u64>> = (0..=depth).map(|_| HashSet::from([0u64])).collect();
    let mut columns: Vec<Vec<u32>> = Vec::with_capacity(n + 1);
    let add_column = |col: Vec<u32>, reach: &mut Vec<HashSet<u64>>, columns: &mut Vec<Vec<u32>>| {
        for i in (1..=depth).rev() {
            let mut fresh = Vec::new();
            for &x in &reach[i - 1] {
                for a in 1..q {
                    fresh.push(pack.combine(x, &col, a));
                }
            }
            reach[i].extend(fresh);
        }
        columns.push(col);
    };
    for i in 0..rows {
        let mut e = vec![0u32; rows];
        e[i] = 1;
        add_column(e, &mut reach, &mut columns);
    }
    while columns.len() < n {
        let covered = &reach[depth];
        let key = (1..space)
            .find(|key| !covered.contains(key))
            .expect("the GV inequality leaves an uncovered column");
        add_column(pack.unpack(key), &mut reach, &mut columns);
    }

    let mut parity = vec![0u32; rows];
    for col in &columns {
        for (p, &c) in parity.iter_mut().zip(col) {
            *p = field.sub(*p, c);
        }
    }
    let mut scaled = Vec::new();
    let mut dropped = Vec::new();
    // For d = 1 there is no combination of d - 2 columns, so p always stays.
    let parity_appended = d < 2 || !reach[depth].contains(&pack.pack(&parity));
    let kept: Vec<Vec<u32>> = if parity_appended {
        let mut all = columns;
        all.push(parity);
        all
    } else {
        let combo = minimal_combination(&field, &columns, &parity, depth)
            .expect("parity column lies in the reach set");
        let mut out = Vec::with_capacity(columns.len());
        for (idx, col) in columns.into_iter().enumerate() {
            match combo.iter().find(|&&(j, _)| j == idx) {
                None => out.push(col),
                Some(&(_, a)) => {
                    let factor = field.add(1, a);
                    if factor == 0 {
                        dropped.push(idx);
                    } else {
                        scaled.push(idx);
                        out.push(col.iter().map(|&x| field.mul(factor, x)).collect());
                    }
                }
            }
        }
        out
    };
    let n_prime = kept.len();
    let mut h = Matrix::zeros(&field, rows, n_prime);
    for (c, col) in kept.iter().enumerate() {
        for (r, &x) in col.iter().enumerate() {
            h.set(r, c, x);
        }
    }
    let rank = h.rank();
    Ok(GvConstruction {
        h,
        n,
        k,
        d,
        n_prime,
        rank,
        k_prime: n_prime - rank,
        parity_appended,
        scaled,
        dropped,
    })
}

/// Fewest columns (then lexicographically first support and coefficients)
/// whose combination equals `target`. The empty combination covers zero.
fn minimal_combination(
    field: &Field,
    columns: &[Vec<u32>],
    target: &[u32],
    max_size: usize,
) -> Option<Vec<(usize, u32)>> {
    if target.iter().all(|&x| x == 0) {
        return Some(Vec::new());
    }
    let q = field.order();
    for size in 1..=max_size {
        let mut found = None;
        for_each_subset(columns.len(), size, &mut |subset: &[usize]| {
            let mut coeffs = vec![1u32; size];
            loop {
                let mut sum = vec![0u32; target.len()];
                for (&j, &a) in subset.iter().zip(&coeffs) {
                    for (s, &x) in sum.iter_mut().zip(&columns[j]) {
                        *s = field.add(*s, field.mul(a, x));
                    }
                }
                if sum == target {
                    found = Some(subset.iter().copied().zip(coeffs.iter().copied()).collect());
                    return false;
                }
                // odometer over nonzero coefficients, last position fastest
                let mut pos = size;
                loop {
                    if pos == 0 {
                        return true;
                    }
                    pos -= 1;
                    if coeffs[pos] + 1 < q {
                        coeffs[pos] += 1;
                        break;
                    }
                    coeffs[pos] = 1;
                }
            }
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Outcome of [`verify_construction`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GvVerdict {
    pub rows_sum_to_zero: bool,
    pub columns_independent: bool,
    pub length_in_range: bool,
    pub dimension_in_range: bool,
}

impl GvVerdict {
    pub fn passed(&self) -> bool {
        self.rows_sum_to_zero
            && self.columns_independent
            && self.length_in_range
            && self.dimension_in_range
    }
}

/// Checks a construction directly from its matrix: zero row sums, every
/// `d - 1` columns independent (by rank), `n-d+2 <= n′ <= n+1` and
/// `k′ = n′ - (n-k) >= k-d+2`.
pub fn verify_construction(c: &GvConstruction) -> Result<GvVerdict> {
    let h = &c.h;
    let f = h.field();
    let rows_sum_to_zero =
        (0..h.rows()).all(|r| h.row(r).iter().fold(0, |acc, &x| f.add(acc, x)) == 0);
    let mut columns_independent = true;
    let size = c.d.saturating_sub(1).min(h.cols());
    let mut failure = None;
    for_each_subset(
        h.cols(),
        size,
        &mut |subset: &[usize]| match h.columns_independent(subset) {
            Ok(true) => true,
            Ok(false) => {
                columns_independent = false;
                false
            }
            Err(e) => {
                failure = Some(e);
                false
            }
        },
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let length_in_range = c.n_prime + c.d >= c.n + 2 && c.n_prime <= c.n + 1;
    let formal_k = c.n_prime as i64 - (c.n - c.k) as i64;
    let dimension_in_range = formal_k >= c.k as i64 - c.d as i64 + 2;
    Ok(GvVerdict {
        rows_sum_to_zero,
        columns_independent,
        length_in_range,
        dimension_in_range,
    })
}

/// A masking + error-correcting scheme built from a GV construction.
#[derive(Clone, Debug)]
pub struct GvPsmc {
    pub construction: GvConstruction,
    pub scheme: AllOneMaskingCode,
    pub u: usize,
    pub t: usize,
}

/// Builds the code of [`gv_construct`] and wraps it as a `(u, ⌊(d-1)/2⌋)`
/// masking scheme via the all-one shift. Requires `u < q`.
pub fn psmc_from_gv(n: usize, k: usize, d: usize, q: u32, u: usize) -> Result<GvPsmc> {
    if u >= q as usize {
        return Err(Error::TooManyStuck {
            got: u,
            max: q as usize - 1,
        });
    }
    let construction = gv_construct(n, k, d, q)?;
    let code = if construction.h.rows() == 0 {
        let f = construction.h.field().clone();
        LinearCode::from_generator(Matrix::identity(&f, construction.n_prime))?
    } else {
        LinearCode::from_parity_check(construction.h.clone())
    };
    let t = (d - 1) / 2;
    let scheme = AllOneMaskingCode::new(&code, t)?;
    Ok(GvPsmc {
        construction,
        scheme,
        u,
        t,
    })
}
