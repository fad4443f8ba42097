//! Linear block codes: exhaustive minimum distance, all-one membership and
//! bounded-distance syndrome-table decoding.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;

/// Default cap on exhaustive enumerations (codewords or error patterns).
pub const DEFAULT_BUDGET: u64 = 1 << 24;

/// A linear `[n, k]_q` code carrying both a full-rank generator matrix and a
/// full-rank parity-check matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    field: Field,
    generator: Matrix,
    parity_check: Matrix,
}

impl LinearCode {
    /// Code spanned by the rows of `generator`, which must have full row rank.
    pub fn from_generator(generator: Matrix) -> Result<LinearCode> {
        let rank = generator.rank();
        if rank != generator.rows() {
            return Err(Error::InvalidCode(format!(
                "generator has {} rows but rank {rank}",
                generator.rows()
            )));
        }
        let parity_check = generator.kernel_basis();
        Ok(LinearCode {
            field: generator.field().clone(),
            generator,
            parity_check,
        })
    }

    /// Code annihilated by `parity_check`. Dependent rows are allowed; they
    /// are replaced by a row-space basis.
    pub fn from_parity_check(parity_check: Matrix) -> LinearCode {
        let generator = parity_check.kernel_basis();
        let parity_check = if parity_check.rank() == parity_check.rows() {
            parity_check
        } else {
            parity_check.row_space_basis()
        };
        LinearCode {
            field: generator.field().clone(),
            generator,
            parity_check,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn length(&self) -> usize {
        self.generator.cols()
    }

    pub fn dimension(&self) -> usize {
        self.generator.rows()
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn parity_check(&self) -> &Matrix {
        &self.parity_check
    }

    /// The dual code: generator and parity-check roles swapped.
    pub fn dual(&self) -> LinearCode {
        LinearCode {
            field: self.field.clone(),
            generator: self.parity_check.clone(),
            parity_check: self.generator.clone(),
        }
    }

    /// `m · G`.
    pub fn encode(&self, message: &[u32]) -> Result<Vec<u32>> {
        self.generator.vec_mul(message)
    }

    pub fn syndrome(&self, word: &[u32]) -> Result<Vec<u32>> {
        self.parity_check.mul_vec(word)
    }

    pub fn is_codeword(&self, word: &[u32]) -> Result<bool> {
        Ok(self.syndrome(word)?.iter().all(|&s| s == 0))
    }

    pub fn contains_all_one(&self) -> bool {
        let ones = vec![1u32; self.length()];
        self.is_codeword(&ones).expect("length matches")
    }

    /// Same code as a set of codewords.
    pub fn same_code(&self, other: &LinearCode) -> bool {
        self.field == other.field
            && self.length() == other.length()
            && self.generator.row_space_basis() == other.generator.row_space_basis()
    }

    /// Minimum Hamming weight over all nonzero codewords, by exhaustive
    /// enumeration of `q^k` messages. The zero code reports `n + 1`.
    pub fn min_distance(&self, budget: u64) -> Result<usize> {
        let k = self.dimension();
        let n = self.length();
        if k == 0 {
            return Ok(n + 1);
        }
        let q = self.field.order() as u128;
        let total = q.checked_pow(k as u32);
        match total {
            Some(t) if t - 1 <= budget as u128 => {}
            _ => {
                return Err(Error::BudgetExceeded {
                    needed: format!("{}^{}", q, k),
                    budget,
                    hint: "; certify the distance with column independence of the parity-check matrix instead",
                })
            }
        }
        let f = &self.field;
        let p = f.characteristic();
        // Over GF(p) the code is spanned by x^b · g_i; walking an odometer
        // over those coefficients adds exactly one basis vector per digit
        // step (a wrap from p-1 to 0 is also +1 since p · v = 0).
        let mut basis = Vec::with_capacity(k * f.degree() as usize);
        for i in 0..k {
            for b in 0..f.degree() {
                let scalar = p.pow(b);
                basis.push(
                    self.generator
                        .row(i)
                        .iter()
                        .map(|&g| f.mul(scalar, g))
                        .collect::<Vec<u32>>(),
                );
            }
        }
        let mut digits = vec![0u32; basis.len()];
        let mut word = vec![0u32; n];
        let mut best = n + 1;
        loop {
            let mut j = 0;
            loop {
                if j == basis.len() {
                    return Ok(best);
                }
                if p == 2 {
                    for (w, &b) in word.iter_mut().zip(&basis[j]) {
                        *w ^= b;
                    }
                } else {
                    for (w, &b) in word.iter_mut().zip(&basis[j]) {
                        *w = f.add(*w, b);
                    }
                }
                digits[j] += 1;
                if digits[j] == p {
                    digits[j] = 0;
                    j += 1;
                } else {
                    break;
                }
            }
            let wt = Field::weight(&word);
            if wt != 0 && wt < best {
                best = wt;
            }
        }
    }

    /// Smallest `s <= limit` such that some `s` columns of the parity-check
    /// matrix are linearly dependent, or `None` if every set of at most
    /// `limit` columns is independent (which certifies `d > limit`).
    pub fn min_dependent_columns(&self, limit: usize, budget: u64) -> Result<Option<usize>> {
        let n = self.length();
        let limit = limit.min(n);
        let mut needed: u128 = 0;
        for s in 1..=limit {
            needed += binomial_u128(n, s);
        }
        if needed > budget as u128 {
            return Err(Error::BudgetExceeded {
                needed: needed.to_string(),
                budget,
                hint: "",
            });
        }
        for s in 1..=limit {
            let mut found = false;
            for_each_subset(n, s, &mut |cols| {
                if !self
                    .parity_check
                    .columns_independent(cols)
                    .expect("indices in range")
                {
                    found = true;
                    return false;
                }
                true
            });
            if found {
                return Ok(Some(s));
            }
        }
        Ok(None)
    }
}

pub(crate) fn binomial_u128(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Calls `visit` with every `size`-subset of `0..n` in lexicographic order
/// until it returns `false`.
pub(crate) fn for_each_subset(n: usize, size: usize, visit: &mut dyn FnMut(&[usize]) -> bool) {
    if size > n {
        return;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        if !visit(&idx) {
            return;
        }
        let mut i = size;
        while i > 0 && idx[i - 1] == i - 1 + n - size {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Bounded-distance decoder: a table from syndrome to the unique error
/// pattern of weight at most `t` producing it.
#[derive(Clone, Debug)]
pub struct SyndromeDecoder {
    code: LinearCode,
    radius: usize,
    table: HashMap<Vec<u32>, Vec<(usize, u32)>>,
}

impl SyndromeDecoder {
    /// Builds the table, failing with [`Error::SyndromeCollision`] if two
    /// patterns of weight `<= t` share a syndrome (so `d < 2t + 1`).
    pub fn new(code: &LinearCode, t: usize, budget: u64) -> Result<SyndromeDecoder> {
        let n = code.length();
        let f = code.field().clone();
        let q1 = (f.order() - 1) as u128;
        let mut needed: u128 = 0;
        for j in 0..=t.min(n) {
            needed = needed
                .saturating_add(binomial_u128(n, j).saturating_mul(q1.saturating_pow(j as u32)));
        }
        if needed > budget as u128 {
            return Err(Error::BudgetExceeded {
                needed: needed.to_string(),
                budget,
                hint: "; syndrome table too large",
            });
        }
        let h = code.parity_check();
        let columns: Vec<Vec<u32>> = (0..n).map(|c| h.column(c)).collect();
        let mut table: HashMap<Vec<u32>, Vec<(usize, u32)>> = HashMap::new();
        table.insert(vec![0; h.rows()], Vec::new());
        let mut collision = false;
        for weight in 1..=t.min(n) {
            for_each_subset(n, weight, &mut |support| {
                let mut values = vec![1u32; weight];
                loop {
                    let mut s = vec![0u32; h.rows()];
                    for (&pos, &val) in support.iter().zip(&values) {
                        for (acc, &hc) in s.iter_mut().zip(&columns[pos]) {
                            *acc = f.add(*acc, f.mul(val, hc));
                        }
                    }
                    let pattern: Vec<(usize, u32)> = support
                        .iter()
                        .copied()
                        .zip(values.iter().copied())
                        .collect();
                    if table.insert(s, pattern).is_some() {
                        collision = true;
                        return false;
                    }
                    // next nonzero value assignment
                    let mut i = 0;
                    while i < weight {
                        values[i] += 1;
                        if values[i] < f.order() {
                            break;
                        }
                        values[i] = 1;
                        i += 1;
                    }
                    if i == weight {
                        return true;
                    }
                }
            });
            if collision {
                return Err(Error::SyndromeCollision { t });
            }
        }
        Ok(SyndromeDecoder {
            code: code.clone(),
            radius: t,
            table,
        })
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    /// Number of correctable patterns (including the zero pattern).
    pub fn table_len(&self) -> usize {
        self.table.len()
    }

    /// Returns the unique codeword within distance `t` of `received`.
    pub fn decode(&self, received: &[u32]) -> Result<Vec<u32>> {
        let s = self.code.syndrome(received)?;
        let pattern = self
            .table
            .get(&s)
            .ok_or(Error::DecodeFailure { t: self.radius })?;
        let f = self.code.field();
        let mut word = received.to_vec();
        for &(pos, val) in pattern {
            word[pos] = f.sub(word[pos], val);
        }
        Ok(word)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bin() -> Field {
        Field::binary()
    }

    fn repetition3() -> LinearCode {
        LinearCode::from_generator(Matrix::from_rows(&bin(), &[vec![1, 1, 1]]).unwrap()).unwrap()
    }

    fn hamming74() -> LinearCode {
        let h = Matrix::from_rows(
            &bin(),
            &[
                vec![1, 0, 1, 0, 1, 0, 1],
                vec![0, 1, 1, 0, 0, 1, 1],
                vec![0, 0, 0, 1, 1, 1, 1],
            ],
        )
        .unwrap();
        LinearCode::from_parity_check(h)
    }

    /// Independent oracle: smallest weight over every nonzero message, by
    /// direct `m · G` products.
    fn brute_distance(code: &LinearCode) -> usize {
        let q = code.field().order() as usize;
        let k = code.dimension();
        let mut best = code.length() + 1;
        for idx in 1..q.pow(k as u32) {
            let mut rest = idx;
            let m: Vec<u32> = (0..k)
                .map(|_| {
                    let d = (rest % q) as u32;
                    rest /= q;
                    d
                })
                .collect();
            best = best.min(Field::weight(&code.encode(&m).unwrap()));
        }
        best
    }

    #[test]
    fn subsets_enumerate_all() {
        let mut count = 0;
        for_each_subset(6, 3, &mut |s| {
            assert!(s.windows(2).all(|w| w[0] < w[1]));
            count += 1;
            true
        });
        assert_eq!(count, 20);
        let mut empty = 0;
        for_each_subset(4, 0, &mut |s| {
            assert!(s.is_empty());
            empty += 1;
            true
        });
        assert_eq!(empty, 1);
    }

    #[test]
    fn small_code_distances() {
        assert_eq!(repetition3().min_distance(DEFAULT_BUDGET).unwrap(), 3);
        let h = hamming74();
        assert_eq!(h.dimension(), 4);
        assert_eq!(brute_distance(&h), 3);
        assert_eq!(h.min_distance(DEFAULT_BUDGET).unwrap(), 3);
    }

    #[test]
    fn distance_budget() {
        let err = hamming74().min_distance(10).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
        assert_eq!(err.exit_code(), 5);
    }

    #[test]
    fn all_one_membership() {
        assert!(repetition3().contains_all_one());
        let even = repetition3().dual();
        assert_eq!(even.dimension(), 2);
        assert!(!even.contains_all_one());
        assert!(hamming74().contains_all_one());
    }

    #[test]
    fn dual_examples() {
        let full = LinearCode::from_generator(Matrix::identity(&bin(), 4)).unwrap();
        let zero = full.dual();
        assert_eq!(zero.dimension(), 0);
        assert_eq!(zero.length(), 4);
        let even = repetition3().dual();
        for w in [[1, 1, 0], [0, 1, 1], [1, 0, 1]] {
            assert!(even.is_codeword(&w).unwrap());
        }
        assert!(even.dual().same_code(&repetition3()));
    }

    #[test]
    fn encode_satisfies_parity() {
        let f = Field::new(3, 1).unwrap();
        let g = Matrix::from_rows(&f, &[vec![1, 0, 1, 2, 1], vec![0, 1, 2, 2, 0]]).unwrap();
        let c = LinearCode::from_generator(g).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                assert!(c.is_codeword(&c.encode(&[a, b]).unwrap()).unwrap());
            }
        }
        assert_eq!(c.encode(&[0, 0]).unwrap(), vec![0; 5]);
        assert_eq!(c.encode(&[1, 0]).unwrap(), vec![1, 0, 1, 2, 1]);
    }

    #[test]
    fn rank_deficient_generator_rejected() {
        let g = Matrix::from_rows(&bin(), &[vec![1, 1, 0], vec![1, 1, 0]]).unwrap();
        assert!(LinearCode::from_generator(g).is_err());
    }

    #[test]
    fn distance_matches_column_characterization() {
        // Every binary and ternary code with a 2- or 3-row parity check of small length.
        for (f, rows, cols) in [(bin(), 3usize, 6usize), (Field::new(3, 1).unwrap(), 2, 4)] {
            let q = f.order() as u64;
            let total = q.pow((rows * cols) as u32);
            let step = (total / 300).max(1);
            let mut idx = 0;
            while idx < total {
                let mut rest = idx;
                let data: Vec<u32> = (0..rows * cols)
                    .map(|_| {
                        let d = (rest % q) as u32;
                        rest /= q;
                        d
                    })
                    .collect();
                let h = Matrix::from_vec(&f, rows, cols, data).unwrap();
                let code = LinearCode::from_parity_check(h);
                let d = code.min_distance(DEFAULT_BUDGET).unwrap();
                assert_eq!(d, brute_distance(&code));
                let by_cols = code
                    .min_dependent_columns(cols, DEFAULT_BUDGET)
                    .unwrap()
                    .unwrap_or(cols + 1);
                assert_eq!(d, by_cols, "{:?}", code.parity_check());
                idx += step;
            }
        }
    }

    #[test]
    fn syndrome_decoder_corrects_radius() {
        let f = Field::new(2, 2).unwrap();
        let g = Matrix::from_rows(&f, &[vec![1, 1, 1, 1, 1], vec![0, 1, 2, 3, 1]]).unwrap();
        let code = LinearCode::from_generator(g).unwrap();
        let d = code.min_distance(DEFAULT_BUDGET).unwrap();
        let t = (d - 1) / 2;
        assert!(t >= 1);
        let dec = SyndromeDecoder::new(&code, t, DEFAULT_BUDGET).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                let c = code.encode(&[a, b]).unwrap();
                assert_eq!(dec.decode(&c).unwrap(), c);
                for pos in 0..5 {
                    for e in 1..4 {
                        let mut y = c.clone();
                        y[pos] = f.add(y[pos], e);
                        assert_eq!(dec.decode(&y).unwrap(), c);
                    }
                }
            }
        }
    }

    #[test]
    fn syndrome_collision_detected() {
        // repetition code of length 3 cannot correct 2 errors
        let err = SyndromeDecoder::new(&repetition3(), 2, DEFAULT_BUDGET).unwrap_err();
        assert_eq!(err, Error::SyndromeCollision { t: 2 });
    }

    #[test]
    fn decode_failure_outside_radius() {
        // [4,1] repetition: radius 1 table covers 5 of the 8 syndromes
        let g = Matrix::from_rows(&bin(), &[vec![1, 1, 1, 1]]).unwrap();
        let code = LinearCode::from_generator(g).unwrap();
        let dec = SyndromeDecoder::new(&code, 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(dec.table_len(), 5);
        assert_eq!(
            dec.decode(&[1, 1, 0, 0]).unwrap_err(),
            Error::DecodeFailure { t: 1 }
        );
    }
}
