//! Partially-stuck-at masking codes (PSMCs) with error correction.
//!
//! [`PsmcScheme`] masks up to `u` partially-stuck-at-1 cells over GF(2^λ)
//! by reducing them to at most `u0 = ⌊2u / 2^λ⌋` binary stuck constraints:
//! a coset shift `(z + 1) · 1` with `z ∈ F` moves all but `u0` stuck
//! coordinates out of GF(2), and a binary vector `z_vec · H0` fixes the
//! rest. The generator
//!
//! ```text
//! G = [ I_l    R       0 ]
//!     [ 0    I_k1  P   0 ]
//!     [ 1  ...  ...    1 ]
//! ```
//!
//! makes every output a codeword of an `[n+1, l+k1+1, d >= 2t+1]` code, so
//! the decoder first corrects errors and then peels off the shift, the
//! masking vector (via the projection that zeroes `a_0`), and the message.
//!
//! [`AllOneMaskingCode`] is the simpler scheme for `u < q`: any code that
//! contains the all-one word masks `u` cells by adding `γ · 1` for a `γ`
//! avoiding the at most `u` forbidden values.

use crate::code::{LinearCode, SyndromeDecoder, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;

/// Positions and levels of partially stuck cells in a word of `length` cells.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StuckProfile {
    length: usize,
    positions: Vec<usize>,
    levels: Vec<u32>,
}

impl StuckProfile {
    /// Positions must be distinct and below `length`; they are stored sorted.
    /// Levels must be at least 1 (level 0 is a healthy cell).
    pub fn new(length: usize, positions: Vec<usize>, levels: Vec<u32>) -> Result<StuckProfile> {
        if positions.len() != levels.len() {
            return Err(Error::InvalidStuckProfile(format!(
                "{} positions but {} levels",
                positions.len(),
                levels.len()
            )));
        }
        let mut pairs: Vec<(usize, u32)> = positions.into_iter().zip(levels).collect();
        pairs.sort_unstable();
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidStuckProfile(format!(
                    "position {} repeated",
                    w[0].0
                )));
            }
        }
        for &(pos, level) in &pairs {
            if pos >= length {
                return Err(Error::InvalidStuckProfile(format!(
                    "position {pos} outside a word of length {length}"
                )));
            }
            if level == 0 {
                return Err(Error::InvalidStuckProfile(format!(
                    "level 0 at position {pos} is not a stuck cell"
                )));
            }
        }
        let (positions, levels) = pairs.into_iter().unzip();
        Ok(StuckProfile {
            length,
            positions,
            levels,
        })
    }

    /// All cells at the same level.
    pub fn uniform(length: usize, positions: Vec<usize>, level: u32) -> Result<StuckProfile> {
        let levels = vec![level; positions.len()];
        StuckProfile::new(length, positions, levels)
    }

    pub fn empty(length: usize) -> StuckProfile {
        StuckProfile {
            length,
            positions: Vec::new(),
            levels: Vec::new(),
        }
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn is_stuck(&self, pos: usize) -> bool {
        self.positions.binary_search(&pos).is_ok()
    }

    pub fn level_at(&self, pos: usize) -> Option<u32> {
        self.positions
            .binary_search(&pos)
            .ok()
            .map(|i| self.levels[i])
    }

    /// True iff every stuck cell holds a value at least its level (values
    /// ordered by their integer encoding, so `0 < 1 < everything else`).
    pub fn admits(&self, word: &[u32]) -> bool {
        word.len() == self.length
            && self
                .positions
                .iter()
                .zip(&self.levels)
                .all(|(&p, &s)| word[p] >= s)
    }

    fn check_for(&self, field: &Field, length: usize, max: usize) -> Result<()> {
        if self.length != length {
            return Err(Error::InvalidStuckProfile(format!(
                "profile covers {} cells, codewords have {length}",
                self.length
            )));
        }
        if self.len() > max {
            return Err(Error::TooManyStuck {
                got: self.len(),
                max,
            });
        }
        if let Some(&s) = self.levels.iter().find(|&&s| s != 1) {
            if s >= field.order() {
                return Err(Error::InvalidStuckProfile(format!(
                    "level {s} outside GF({})",
                    field.order()
                )));
            }
            return Err(Error::UnsupportedLevel(s));
        }
        Ok(())
    }
}

/// Integer parameters of a scheme: `n + 1` cells, `u` stuck cells, `t`
/// errors, `l` masking symbols, `k1` information symbols, `r` redundancy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PsmcParams {
    pub n: usize,
    pub u: usize,
    pub t: usize,
    pub l: usize,
    pub k1: usize,
    pub r: usize,
}

/// How a distance value was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Distance {
    /// Exhaustive minimum-weight search.
    Exact(usize),
    /// All column sets smaller than this are independent.
    AtLeast(usize),
}

impl Distance {
    pub fn lower_bound(self) -> usize {
        match self {
            Distance::Exact(d) | Distance::AtLeast(d) => d,
        }
    }
}

impl std::fmt::Display for Distance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Distance::Exact(d) => write!(f, "{d}"),
            Distance::AtLeast(d) => write!(f, ">={d}"),
        }
    }
}

/// `d` exactly when the code is small enough, otherwise the certificate
/// "no `need - 1` columns of H are dependent" (so `d >= need`).
fn certify_distance(code: &LinearCode, need: usize, budget: u64) -> Result<Distance> {
    match code.min_distance(budget) {
        Ok(d) => Ok(Distance::Exact(d)),
        Err(Error::BudgetExceeded { .. }) => {
            let limit = need.saturating_sub(1);
            match code.min_dependent_columns(limit, budget)? {
                Some(s) => Ok(Distance::Exact(s)),
                None => Ok(Distance::AtLeast(limit + 1)),
            }
        }
        Err(e) => Err(e),
    }
}

/// The two message parts of a [`PsmcScheme`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Message {
    /// `k1` unrestricted symbols of GF(2^λ).
    pub free: Vec<u32>,
    /// `l` symbols from the masking alphabet `F` (constant coefficient 0).
    pub restricted: Vec<u32>,
}

/// Intermediate values of one encoding, exposed for inspection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Encoding {
    pub codeword: Vec<u32>,
    /// Coset shift `z ∈ F`; the word was shifted by `(z + 1) · 1`.
    pub shift: u32,
    /// Binary masking vector of length `l`.
    pub masking_vector: Vec<u32>,
    /// Stuck coordinates left in GF(2) after the shift.
    pub binary_stuck: usize,
}

/// A validated masking + error-correcting scheme over GF(2^λ).
#[derive(Clone, Debug)]
pub struct PsmcScheme {
    field: Field,
    params: PsmcParams,
    h0: Matrix,
    p: Matrix,
    generator: Matrix,
    code: LinearCode,
    decoder: SyndromeDecoder,
    u0: usize,
    d: Distance,
    d0: Distance,
}

impl PsmcScheme {
    pub fn build(field: &Field, params: PsmcParams, h0: &Matrix, p: &Matrix) -> Result<PsmcScheme> {
        Self::build_with_budget(field, params, h0, p, DEFAULT_BUDGET)
    }

    /// Validates every structural condition and assembles `G`. Each failed
    /// condition yields its own error variant.
    pub fn build_with_budget(
        field: &Field,
        params: PsmcParams,
        h0: &Matrix,
        p: &Matrix,
        budget: u64,
    ) -> Result<PsmcScheme> {
        if field.characteristic() != 2 {
            return Err(Error::NotCharacteristicTwo(field.characteristic()));
        }
        if field.degree() < 2 {
            return Err(Error::SchemeDimensions(
                "extension degree must be at least 2".into(),
            ));
        }
        let PsmcParams { n, u, t, l, k1, r } = params;
        if l == 0 || k1 == 0 || r == 0 {
            return Err(Error::SchemeDimensions(format!(
                "l, k1, r must be positive (got {l}, {k1}, {r})"
            )));
        }
        if l + k1 + r != n {
            return Err(Error::SchemeDimensions(format!(
                "l + k1 + r = {} but n = {n}",
                l + k1 + r
            )));
        }
        if u > n || t > n {
            return Err(Error::SchemeDimensions(format!(
                "u = {u} and t = {t} must not exceed n = {n}"
            )));
        }
        if h0.rows() != l || h0.cols() != n {
            return Err(Error::SchemeDimensions(format!(
                "H0 is {}x{}, expected {l}x{n}",
                h0.rows(),
                h0.cols()
            )));
        }
        if p.rows() != k1 || p.cols() != r {
            return Err(Error::SchemeDimensions(format!(
                "P is {}x{}, expected {k1}x{r}",
                p.rows(),
                p.cols()
            )));
        }
        for row in 0..l {
            for col in 0..n {
                let v = h0.get(row, col);
                if v > 1 {
                    return Err(Error::H0NotBinary { row, col, value: v });
                }
                if col < l && v != u32::from(row == col) {
                    return Err(Error::H0NotSystematic(format!(
                        "entry ({row}, {col}) = {v} breaks the leading identity"
                    )));
                }
            }
        }
        let p = if p.field() == field {
            p.clone()
        } else {
            p.embed(field)?
        };
        let binary = Field::binary();
        let h0_bin = h0.embed(&binary)?;
        let h0_big = h0.embed(field)?;

        let u0 = 2 * u / field.order() as usize;
        let masking_code = LinearCode::from_parity_check(h0_bin.clone());
        let d0 = certify_distance(&masking_code, u0 + 1, budget)?;
        if d0.lower_bound() < u0 + 1 {
            return Err(Error::MaskingDistanceTooSmall {
                d0: d0.lower_bound(),
                needed: u0 + 1,
            });
        }

        let mut generator = Matrix::zeros(field, l + k1 + 1, n + 1);
        for i in 0..l {
            for j in 0..n {
                generator.set(i, j, h0_big.get(i, j));
            }
        }
        for i in 0..k1 {
            generator.set(l + i, l + i, 1);
            for j in 0..r {
                generator.set(l + i, l + k1 + j, p.get(i, j));
            }
        }
        for j in 0..=n {
            generator.set(l + k1, j, 1);
        }
        let code = LinearCode::from_generator(generator.clone())?;
        let d = certify_distance(&code, 2 * t + 1, budget)?;
        if d.lower_bound() < 2 * t + 1 {
            return Err(Error::CodeDistanceTooSmall {
                d: d.lower_bound(),
                needed: 2 * t + 1,
            });
        }
        let decoder = SyndromeDecoder::new(&code, t, budget)?;
        Ok(PsmcScheme {
            field: field.clone(),
            params,
            h0: h0_bin,
            p,
            generator,
            code,
            decoder,
            u0,
            d,
            d0,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn params(&self) -> PsmcParams {
        self.params
    }

    /// Binary systematic matrix `[I_l | R]`.
    pub fn h0(&self) -> &Matrix {
        &self.h0
    }

    pub fn p(&self) -> &Matrix {
        &self.p
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    pub fn u0(&self) -> usize {
        self.u0
    }

    pub fn distance(&self) -> Distance {
        self.d
    }

    pub fn masking_distance(&self) -> Distance {
        self.d0
    }

    /// Codeword length `n + 1`.
    pub fn length(&self) -> usize {
        self.params.n + 1
    }

    /// `log2` of the number of messages: `λ(k1 + l) − l`.
    pub fn message_bits(&self) -> usize {
        let lambda = self.field.degree() as usize;
        lambda * (self.params.k1 + self.params.l) - self.params.l
    }

    pub fn encode(&self, message: &Message, stuck: &StuckProfile) -> Result<Vec<u32>> {
        Ok(self.encode_detailed(message, stuck)?.codeword)
    }

    pub fn encode_detailed(&self, message: &Message, stuck: &StuckProfile) -> Result<Encoding> {
        let f = &self.field;
        let PsmcParams { n, u, l, k1, .. } = self.params;
        if message.free.len() != k1 || message.restricted.len() != l {
            return Err(Error::Dimension(format!(
                "message parts of length {} and {}, expected {k1} and {l}",
                message.free.len(),
                message.restricted.len()
            )));
        }
        for &v in &message.free {
            f.check(v)?;
        }
        for (index, &v) in message.restricted.iter().enumerate() {
            f.check(v)?;
            if v & 1 != 0 {
                return Err(Error::NotInMaskingAlphabet { index, value: v });
            }
        }
        stuck.check_for(f, n + 1, u)?;

        // a + b: restricted · [H0 | 0] + free · [G1 | 0] is the first l + k1 rows of G.
        let mut coeffs = message.restricted.clone();
        coeffs.extend_from_slice(&message.free);
        let rows: Vec<usize> = (0..l + k1).collect();
        let base = self.generator.select_rows(&rows)?.vec_mul(&coeffs)?;

        let (shift, binary_stuck) = select_coset_shift(f, &base, stuck.positions())?;
        if binary_stuck > self.u0 {
            return Err(Error::MaskingFailed(format!(
                "{binary_stuck} binary stuck coordinates after shifting, bound is {}",
                self.u0
            )));
        }
        let offset = f.add(shift, 1);
        let w: Vec<u32> = base.iter().map(|&b| f.add(b, offset)).collect();
        let masking_vector = solve_masking_vector(&self.h0, &w, stuck.positions(), self.u0)?;
        let correction = self.h0.vec_mul(&masking_vector)?;
        let mut codeword = w;
        for (c, &x) in codeword.iter_mut().zip(&correction) {
            *c = f.add(*c, x);
        }
        Ok(Encoding {
            codeword,
            shift,
            masking_vector,
            binary_stuck,
        })
    }

    /// Corrects up to `t` errors, then recovers both message parts.
    pub fn decode(&self, received: &[u32]) -> Result<Message> {
        let f = &self.field;
        let PsmcParams { n, l, k1, .. } = self.params;
        if received.len() != n + 1 {
            return Err(Error::Dimension(format!(
                "received word of length {}, expected {}",
                received.len(),
                n + 1
            )));
        }
        for &v in received {
            f.check(v)?;
        }
        let v = self.decoder.decode(received)?;
        // The last coordinate is exactly the shift z + 1.
        let last = v[n];
        let v1: Vec<u32> = v.iter().map(|&x| f.sub(x, last)).collect();
        let combined = &v1[..l];
        let restricted = combined
            .iter()
            .map(|&x| f.phi_project(x))
            .collect::<Result<Vec<u32>>>()?;
        let strip = self.generator.select_rows(&(0..l).collect::<Vec<_>>())?;
        let sub = strip.vec_mul(combined)?;
        let free = (l..l + k1).map(|j| f.sub(v1[j], sub[j])).collect();
        Ok(Message { free, restricted })
    }
}

/// Picks `z ∈ F` minimising the number of stuck coordinates of
/// `base + (z + 1) · 1` that land in GF(2). Ties go to the smallest `z`.
/// Returns `(z, count)`.
pub fn select_coset_shift(
    field: &Field,
    base: &[u32],
    positions: &[usize],
) -> Result<(u32, usize)> {
    let mut best: Option<(u32, usize)> = None;
    for z in field.masking_alphabet()? {
        let offset = field.add(z, 1);
        let count = positions
            .iter()
            .filter(|&&p| field.add(base[p], offset) <= 1)
            .count();
        if best.is_none_or(|(_, c)| count < c) {
            best = Some((z, count));
        }
    }
    Ok(best.expect("masking alphabet contains 0"))
}

/// Finds a binary `z_vec` with `(z_vec · H0 | 0)` equal to 1 where `w` is 0
/// and 0 where `w` is 1, at the stuck positions. Positions holding values
/// outside GF(2) are unconstrained. Free variables are zero.
pub fn solve_masking_vector(
    h0: &Matrix,
    w: &[u32],
    positions: &[usize],
    u0: usize,
) -> Result<Vec<u32>> {
    let n = h0.cols();
    let mut cols = Vec::new();
    let mut target = Vec::new();
    let mut constrained = 0;
    for &p in positions {
        let value = w[p];
        if value > 1 {
            continue;
        }
        constrained += 1;
        if p >= n {
            // The appended coordinate receives nothing from z_vec · H0.
            if value == 0 {
                return Err(Error::MaskingFailed(format!(
                    "position {p} is zero and outside the reach of H0"
                )));
            }
            continue;
        }
        cols.push(p);
        target.push(1 - value);
    }
    if constrained > u0 {
        return Err(Error::MaskingFailed(format!(
            "{constrained} constrained positions exceed u0 = {u0}"
        )));
    }
    if cols.is_empty() {
        return Ok(vec![0; h0.rows()]);
    }
    let binary = Field::binary();
    let sub = h0.embed(&binary)?.select_columns(&cols)?;
    sub.solve_left(&target)?.ok_or_else(|| {
        Error::MaskingFailed(format!(
            "columns {cols:?} of H0 cannot realise the masking pattern"
        ))
    })
}

/// Masking scheme for `u < q` stuck cells built on any code containing the
/// all-one word: encode `m · G_sub + γ · 1` where `[G_sub; 1]` is a basis of
/// the code and `γ` is the smallest value clearing every stuck cell.
#[derive(Clone, Debug)]
pub struct AllOneMaskingCode {
    code: LinearCode,
    message_basis: Matrix,
    full_basis: Matrix,
    decoder: SyndromeDecoder,
}

impl AllOneMaskingCode {
    pub fn new(code: &LinearCode, t: usize) -> Result<AllOneMaskingCode> {
        Self::with_budget(code, t, DEFAULT_BUDGET)
    }

    pub fn with_budget(code: &LinearCode, t: usize, budget: u64) -> Result<AllOneMaskingCode> {
        if !code.contains_all_one() {
            return Err(Error::InvalidCode(
                "code does not contain the all-one word".into(),
            ));
        }
        let f = code.field();
        let n = code.length();
        let ones = Matrix::from_vec(f, 1, n, vec![1; n])?;
        // Greedily extend {1} to a basis with generator rows.
        let mut basis = ones.clone();
        let mut chosen = Vec::new();
        let g = code.generator();
        for i in 0..g.rows() {
            let candidate = basis.vstack(&g.select_rows(&[i])?)?;
            if candidate.rank() == candidate.rows() {
                basis = candidate;
                chosen.push(i);
            }
        }
        let message_basis = g.select_rows(&chosen)?;
        let full_basis = message_basis.vstack(&ones)?;
        let decoder = SyndromeDecoder::new(code, t, budget)?;
        Ok(AllOneMaskingCode {
            code: code.clone(),
            message_basis,
            full_basis,
            decoder,
        })
    }

    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    pub fn length(&self) -> usize {
        self.code.length()
    }

    /// Number of message symbols, `k - 1`.
    pub fn message_len(&self) -> usize {
        self.message_basis.rows()
    }

    pub fn radius(&self) -> usize {
        self.decoder.radius()
    }

    /// Largest maskable number of stuck cells, `q - 1`.
    pub fn max_stuck(&self) -> usize {
        self.code.field().order() as usize - 1
    }

    /// Smallest `γ` with `base_i + γ ≠ 0` on every stuck position.
    pub fn select_shift(&self, base: &[u32], stuck: &StuckProfile) -> Option<u32> {
        let f = self.code.field();
        let forbidden: Vec<u32> = stuck.positions().iter().map(|&p| f.neg(base[p])).collect();
        (0..f.order()).find(|g| !forbidden.contains(g))
    }

    pub fn encode(&self, message: &[u32], stuck: &StuckProfile) -> Result<Vec<u32>> {
        let f = self.code.field();
        if stuck.len() >= f.order() as usize {
            return Err(Error::TooManyStuck {
                got: stuck.len(),
                max: self.max_stuck(),
            });
        }
        stuck.check_for(f, self.length(), self.max_stuck())?;
        for &v in message {
            f.check(v)?;
        }
        let base = self.message_basis.vec_mul(message)?;
        let gamma = self
            .select_shift(&base, stuck)
            .expect("fewer than q forbidden shifts");
        Ok(base.iter().map(|&b| f.add(b, gamma)).collect())
    }

    pub fn decode(&self, received: &[u32]) -> Result<Vec<u32>> {
        for &v in received {
            self.code.field().check(v)?;
        }
        let v = self.decoder.decode(received)?;
        let coords = self
            .full_basis
            .solve_left(&v)?
            .expect("decoded word lies in the code");
        Ok(coords[..self.message_len()].to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf4() -> Field {
        Field::new(2, 2).unwrap()
    }

    /// Small scheme: n = 4, l = 2, k1 = 1, r = 1, t = 0, u = 2.
    fn tiny() -> PsmcScheme {
        let f = gf4();
        let h0 =
            Matrix::from_rows(&Field::binary(), &[vec![1, 0, 1, 1], vec![0, 1, 0, 1]]).unwrap();
        let p = Matrix::from_rows(&f, &[vec![2]]).unwrap();
        let params = PsmcParams {
            n: 4,
            u: 2,
            t: 0,
            l: 2,
            k1: 1,
            r: 1,
        };
        PsmcScheme::build(&f, params, &h0, &p).unwrap()
    }

    #[test]
    fn stuck_profile_validation() {
        assert!(StuckProfile::uniform(5, vec![1, 1], 1).is_err());
        assert!(StuckProfile::uniform(5, vec![5], 1).is_err());
        assert!(StuckProfile::uniform(5, vec![2], 0).is_err());
        let s = StuckProfile::uniform(5, vec![4, 0], 1).unwrap();
        assert_eq!(s.positions(), &[0, 4]);
        assert!(s.admits(&[1, 0, 0, 0, 3]));
        assert!(!s.admits(&[0, 0, 0, 0, 3]));
    }

    #[test]
    fn coset_shift_zero_when_already_outside_gf2() {
        let f = gf4();
        // base + 1 at the stuck cells is {3, 2}: no binary entries for z = 0
        let (z, count) = select_coset_shift(&f, &[2, 3, 0], &[0, 1]).unwrap();
        assert_eq!((z, count), (0, 0));
    }

    #[test]
    fn coset_shift_pigeonhole_exhaustive_gf4() {
        let f = gf4();
        let positions = [0, 1, 2, 3];
        for idx in 0..256u32 {
            let base: Vec<u32> = (0..4).map(|i| (idx >> (2 * i)) & 3).collect();
            // oracle: count binary entries for each z ∈ {0, α} directly
            let counts: Vec<usize> = [0u32, 2]
                .iter()
                .map(|&z| base.iter().filter(|&&b| (b ^ z ^ 1) < 2).count())
                .collect();
            let (z, count) = select_coset_shift(&f, &base, &positions).unwrap();
            assert_eq!(count, *counts.iter().min().unwrap());
            assert!(count <= 2);
            assert_eq!(z, if counts[0] <= counts[1] { 0 } else { 2 });
        }
    }

    #[test]
    fn masking_vector_cases() {
        let h0 = Matrix::from_rows(&Field::binary(), &[vec![1, 0, 1], vec![0, 1, 1]]).unwrap();
        // nothing constrained
        assert_eq!(
            solve_masking_vector(&h0, &[2, 3, 2, 1], &[0, 1], 1).unwrap(),
            vec![0, 0]
        );
        // single zero at an identity column -> unit vector
        assert_eq!(
            solve_masking_vector(&h0, &[2, 0, 2, 1], &[1], 1).unwrap(),
            vec![0, 1]
        );
        // too many constraints
        assert!(solve_masking_vector(&h0, &[0, 0, 2, 1], &[0, 1], 1).is_err());
        // last coordinate equal to 1 is already fine
        assert_eq!(
            solve_masking_vector(&h0, &[2, 2, 2, 1], &[3], 1).unwrap(),
            vec![0, 0]
        );
    }

    #[test]
    fn tiny_scheme_injective_and_roundtrip() {
        let s = tiny();
        assert_eq!(s.u0(), 1);
        assert_eq!(s.message_bits(), 4);
        let stuck = StuckProfile::uniform(5, vec![0, 3], 1).unwrap();
        let mut seen = std::collections::HashSet::new();
        for free in 0..4 {
            for a in [0u32, 2] {
                for b in [0u32, 2] {
                    let msg = Message {
                        free: vec![free],
                        restricted: vec![a, b],
                    };
                    let c = s.encode(&msg, &stuck).unwrap();
                    assert!(stuck.admits(&c));
                    assert!(s.code().is_codeword(&c).unwrap());
                    assert_eq!(s.decode(&c).unwrap(), msg);
                    assert!(seen.insert(c));
                }
            }
        }
        assert_eq!(seen.len(), 1 << s.message_bits());
    }

    #[test]
    fn encode_rejects_bad_inputs() {
        let s = tiny();
        let stuck = StuckProfile::empty(5);
        let odd = Message {
            free: vec![0],
            restricted: vec![1, 0],
        };
        assert_eq!(
            s.encode(&odd, &stuck).unwrap_err(),
            Error::NotInMaskingAlphabet { index: 0, value: 1 }
        );
        let ok = Message {
            free: vec![3],
            restricted: vec![2, 0],
        };
        let three = StuckProfile::uniform(5, vec![0, 1, 2], 1).unwrap();
        assert!(matches!(
            s.encode(&ok, &three),
            Err(Error::TooManyStuck { .. })
        ));
        let level2 = StuckProfile::uniform(5, vec![1], 2).unwrap();
        assert_eq!(
            s.encode(&ok, &level2).unwrap_err(),
            Error::UnsupportedLevel(2)
        );
    }

    #[test]
    fn build_rejects_broken_inputs() {
        let f = gf4();
        let bin = Field::binary();
        let p = Matrix::from_rows(&f, &[vec![2]]).unwrap();
        let good_h0 = Matrix::from_rows(&bin, &[vec![1, 0, 1, 1], vec![0, 1, 0, 1]]).unwrap();
        let params = PsmcParams {
            n: 4,
            u: 2,
            t: 0,
            l: 2,
            k1: 1,
            r: 1,
        };
        let wrong_n = PsmcParams { n: 5, ..params };
        assert!(matches!(
            PsmcScheme::build(&f, wrong_n, &good_h0, &p),
            Err(Error::SchemeDimensions(_))
        ));
        let not_sys = Matrix::from_rows(&bin, &[vec![0, 1, 1, 1], vec![1, 0, 0, 1]]).unwrap();
        assert!(matches!(
            PsmcScheme::build(&f, params, &not_sys, &p),
            Err(Error::H0NotSystematic(_))
        ));
        let not_bin = Matrix::from_rows(&f, &[vec![1, 0, 2, 1], vec![0, 1, 0, 1]]).unwrap();
        assert!(matches!(
            PsmcScheme::build(&f, params, &not_bin, &p),
            Err(Error::H0NotBinary { .. })
        ));
        // zero column in H0 gives d0 = 1 < u0 + 1 = 2
        let weak = Matrix::from_rows(&bin, &[vec![1, 0, 0, 1], vec![0, 1, 0, 1]]).unwrap();
        assert_eq!(
            PsmcScheme::build(&f, params, &weak, &p).unwrap_err(),
            Error::MaskingDistanceTooSmall { d0: 1, needed: 2 }
        );
        let t1 = PsmcParams { t: 1, ..params };
        assert!(matches!(
            PsmcScheme::build(&f, t1, &good_h0, &p),
            Err(Error::CodeDistanceTooSmall { .. })
        ));
        assert!(matches!(
            PsmcScheme::build(&Field::new(3, 2).unwrap(), params, &good_h0, &p),
            Err(Error::NotCharacteristicTwo(3))
        ));
    }

    fn ternary_all_one_code() -> LinearCode {
        // [5, 2] over GF(3) containing 11111 with d = 3
        let f = Field::new(3, 1).unwrap();
        let g = Matrix::from_rows(&f, &[vec![1, 1, 1, 1, 1], vec![0, 1, 2, 0, 1]]).unwrap();
        LinearCode::from_generator(g).unwrap()
    }

    #[test]
    fn all_one_shift_selection() {
        let f = gf4();
        let g = Matrix::from_rows(&f, &[vec![1, 1, 1, 1], vec![0, 1, 2, 3]]).unwrap();
        let code = LinearCode::from_generator(g).unwrap();
        let scheme = AllOneMaskingCode::new(&code, 1).unwrap();
        assert_eq!(scheme.message_len(), 1);
        let stuck = StuckProfile::uniform(4, vec![0, 1, 2], 1).unwrap();
        // would-be symbols 0, 1, α forbid γ ∈ {0, 1, α}
        assert_eq!(scheme.select_shift(&[0, 1, 2, 3], &stuck), Some(3));
        assert_eq!(
            scheme.select_shift(&[0, 1, 2, 3], &StuckProfile::empty(4)),
            Some(0)
        );
        let four = StuckProfile::uniform(4, vec![0, 1, 2, 3], 1).unwrap();
        assert!(matches!(
            scheme.encode(&[1], &four),
            Err(Error::TooManyStuck { .. })
        ));
    }

    #[test]
    fn all_one_roundtrip_ternary() {
        let code = ternary_all_one_code();
        assert_eq!(code.min_distance(DEFAULT_BUDGET).unwrap(), 3);
        let scheme = AllOneMaskingCode::new(&code, 1).unwrap();
        let f = code.field().clone();
        for m in 0..3 {
            for a in 0..5 {
                for b in a + 1..5 {
                    let stuck = StuckProfile::uniform(5, vec![a, b], 1).unwrap();
                    let c = scheme.encode(&[m], &stuck).unwrap();
                    assert!(stuck.admits(&c));
                    assert_eq!(scheme.decode(&c).unwrap(), vec![m]);
                    for pos in 0..5 {
                        for e in 1..3 {
                            let mut y = c.clone();
                            y[pos] = f.add(y[pos], e);
                            assert_eq!(scheme.decode(&y).unwrap(), vec![m]);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn all_one_requires_all_one_word() {
        let f = Field::new(3, 1).unwrap();
        let g = Matrix::from_rows(&f, &[vec![1, 0, 1], vec![0, 1, 1]]).unwrap();
        let code = LinearCode::from_generator(g).unwrap();
        assert!(AllOneMaskingCode::new(&code, 0).is_err());
    }
}
