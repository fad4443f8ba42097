//! Built-in worked example over GF(4): a [15, 11, 3] code with four masking
//! symbols, six information symbols and four stuck cells, together with an
//! earlier generator for the same parameters used as a comparison point.

use crate::code::{LinearCode, DEFAULT_BUDGET};
use crate::error::Result;
use crate::field::Field;
use crate::matrix::Matrix;
use crate::psmc::{Message, PsmcParams, PsmcScheme, StuckProfile};

const G_ROWS: [[u32; 15]; 11] = [
    [1, 0, 0, 0, 1, 0, 1, 0, 1, 1, 1, 1, 0, 0, 0],
    [0, 1, 0, 0, 1, 1, 0, 1, 0, 1, 1, 1, 1, 0, 0],
    [0, 0, 1, 0, 0, 1, 1, 0, 1, 0, 1, 1, 1, 1, 0],
    [0, 0, 0, 1, 0, 0, 1, 1, 0, 1, 0, 1, 1, 1, 0],
    [0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0],
    [0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 1, 1, 0, 0],
    [0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 1, 1, 0],
    [0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 1, 1, 1, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 1, 1, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 1, 0],
    [1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1],
];

const PRIOR_ROWS: [[u32; 15]; 11] = [
    [0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0],
    [0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 1],
    [0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 1, 1, 0],
    [0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 1, 1],
    [0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 1, 1, 1],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 1, 1],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 1],
    [1, 0, 0, 0, 0, 0, 1, 1, 0, 1, 0, 1, 1, 1, 1],
    [0, 1, 0, 0, 1, 1, 0, 1, 0, 1, 1, 1, 1, 0, 0],
    [0, 0, 1, 0, 0, 1, 1, 0, 1, 0, 1, 1, 1, 1, 0],
    [0, 0, 0, 1, 1, 0, 0, 1, 1, 0, 1, 0, 1, 1, 1],
];

/// Masking rows in the earlier generator.
const PRIOR_MASKING_ROWS: usize = 4;

pub const PARAMS: PsmcParams = PsmcParams {
    n: 14,
    u: 4,
    t: 1,
    l: 4,
    k1: 6,
    r: 4,
};

pub const STUCK_POSITIONS: [usize; 4] = [1, 2, 9, 14];

/// GF(4) with modulus `x^2 + x + 1`; `α` is encoded as 2.
pub fn field() -> Field {
    Field::with_modulus(2, 2, 7).expect("x^2 + x + 1 is primitive")
}

fn matrix(rows: &[[u32; 15]]) -> Matrix {
    let rows: Vec<Vec<u32>> = rows.iter().map(|r| r.to_vec()).collect();
    Matrix::from_rows(&field(), &rows).expect("well-formed fixture")
}

pub fn generator() -> Matrix {
    matrix(&G_ROWS)
}

pub fn prior_generator() -> Matrix {
    matrix(&PRIOR_ROWS)
}

/// `[I_4 | R]`, the first four rows of `G` without the last column.
pub fn h0() -> Matrix {
    let rows: Vec<Vec<u32>> = G_ROWS[..4].iter().map(|r| r[..14].to_vec()).collect();
    Matrix::from_rows(&Field::binary(), &rows).expect("binary fixture")
}

/// Rows 4..10 of `G`, columns 10..14.
pub fn p() -> Matrix {
    let rows: Vec<Vec<u32>> = G_ROWS[4..10].iter().map(|r| r[10..14].to_vec()).collect();
    Matrix::from_rows(&field(), &rows).expect("fixture")
}

pub fn scheme() -> Result<PsmcScheme> {
    PsmcScheme::build(&field(), PARAMS, &h0(), &p())
}

/// `m = (1, 0, 1, α, 1+α, 1)`, `m′ = (α, 0, α, 0)`.
pub fn message() -> Message {
    Message {
        free: vec![1, 0, 1, 2, 3, 1],
        restricted: vec![2, 0, 2, 0],
    }
}

pub fn stuck() -> StuckProfile {
    StuckProfile::uniform(PARAMS.n + 1, STUCK_POSITIONS.to_vec(), 1).expect("fixture profile")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub checks: Vec<Check>,
    pub codeword: Vec<u32>,
}

impl Report {
    fn push(&mut self, name: &'static str, passed: bool, detail: String) {
        self.checks.push(Check {
            name,
            passed,
            detail,
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name)
            .collect()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{status} {}: {}\n", c.name, c.detail));
        }
        out
    }
}

/// `q^e` when `bits` is a whole number of symbols, `2^bits` otherwise.
fn power_label(q: u32, bits: usize) -> String {
    let lambda = q.trailing_zeros() as usize;
    if lambda > 0 && bits.is_multiple_of(lambda) {
        format!("{q}^{}", bits / lambda)
    } else {
        format!("2^{bits}")
    }
}

/// Runs the full pipeline on the fixture and records every check.
pub fn run() -> Result<Report> {
    let f = field();
    let mut report = Report::default();
    let scheme = scheme()?;
    report.push(
        "scheme",
        scheme.u0() == 2,
        format!(
            "n={} l={} k1={} r={} u={} t={} u0={} d={} d0={}",
            PARAMS.n,
            PARAMS.l,
            PARAMS.k1,
            PARAMS.r,
            PARAMS.u,
            PARAMS.t,
            scheme.u0(),
            scheme.distance(),
            scheme.masking_distance()
        ),
    );
    report.push(
        "generator",
        *scheme.generator() == generator(),
        "assembled generator equals the fixture".into(),
    );

    let stuck = stuck();
    let enc = scheme.encode_detailed(&message(), &stuck)?;
    let in_code = scheme.code().is_codeword(&enc.codeword)?;
    report.push(
        "masking",
        stuck.admits(&enc.codeword) && in_code,
        format!(
            "codeword [{}] shift z={} masking vector [{}], nonzero at {:?}, in code: {in_code}",
            crate::format::format_vector(&enc.codeword),
            enc.shift,
            crate::format::format_vector(&enc.masking_vector),
            STUCK_POSITIONS
        ),
    );

    let mut patterns = 0;
    let mut good = 0;
    let mut words = vec![enc.codeword.clone()];
    for pos in 0..enc.codeword.len() {
        for e in 1..f.order() {
            let mut y = enc.codeword.clone();
            y[pos] = f.add(y[pos], e);
            words.push(y);
        }
    }
    for y in &words {
        patterns += 1;
        if scheme.decode(y).ok().as_ref() == Some(&message()) {
            good += 1;
        }
    }
    report.push(
        "roundtrip",
        good == patterns,
        format!("{good}/{patterns} error patterns of weight <= 1 decoded"),
    );

    let ours = scheme.message_bits();
    let prior = prior_generator();
    let prior_bits = (prior.rank() - PRIOR_MASKING_ROWS) * f.degree() as usize;
    report.push(
        "cardinality",
        ours > prior_bits,
        format!(
            "Construction 1: {} > prior: {}",
            power_label(f.order(), ours),
            power_label(f.order(), prior_bits)
        ),
    );

    let ours_rref = generator().rref();
    let prior_rref = prior.rref();
    let differing = (0..ours_rref.matrix.rows())
        .filter(|&r| ours_rref.matrix.row(r) != prior_rref.matrix.row(r))
        .count();
    report.push(
        "rref",
        ours_rref.matrix == prior_rref.matrix,
        format!(
            "ranks {} and {}, {differing} differing rows",
            ours_rref.rank, prior_rref.rank
        ),
    );

    let prior_code = LinearCode::from_generator(prior)?;
    let prior_d = prior_code.min_distance(DEFAULT_BUDGET)?;
    report.push(
        "prior distance",
        prior_d >= 3,
        format!("minimum distance of the earlier code is {prior_d}"),
    );
    report.codeword = enc.codeword;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_blocks() {
        assert_eq!(h0().rows(), 4);
        assert_eq!(h0().cols(), 14);
        assert_eq!(p().rows(), 6);
        assert_eq!(p().cols(), 4);
        assert_eq!(generator().rank(), 11);
        assert_eq!(prior_generator().rank(), 11);
    }

    use crate::code::LinearCode;
    use crate::error::Error;
    use crate::psmc::{select_coset_shift, solve_masking_vector};
    use proptest::prelude::*;
    use std::sync::OnceLock;

    fn shared() -> &'static PsmcScheme {
        static SCHEME: OnceLock<PsmcScheme> = OnceLock::new();
        SCHEME.get_or_init(|| scheme().unwrap())
    }

    #[test]
    fn empty_profile_still_codeword() {
        let s = shared();
        let c = s.encode(&message(), &StuckProfile::empty(15)).unwrap();
        assert!(s.code().is_codeword(&c).unwrap());
        assert_eq!(s.decode(&c).unwrap(), message());
    }

    #[test]
    fn last_cell_needs_no_masking_vector() {
        let s = shared();
        let zero = Message {
            free: vec![0; 6],
            restricted: vec![0; 4],
        };
        let stuck = StuckProfile::uniform(15, vec![14], 1).unwrap();
        let enc = s.encode_detailed(&zero, &stuck).unwrap();
        assert_eq!(enc.masking_vector, vec![0; 4]);
        assert_eq!(enc.codeword[14], f_add(enc.shift, 1));
        assert_ne!(enc.codeword[14], 0);
    }

    fn f_add(a: u32, b: u32) -> u32 {
        field().add(a, b)
    }

    #[test]
    fn two_constraints_on_example_positions() {
        let h0 = h0();
        // w binary at stuck cells 1 and 9: want (z·H0) = 1 at 1 (w=0) and 0 at 9 (w=1)
        let mut w = vec![2u32; 15];
        w[1] = 0;
        w[9] = 1;
        let z = solve_masking_vector(&h0, &w, &STUCK_POSITIONS, 2).unwrap();
        let image = h0.vec_mul(&z).unwrap();
        assert_eq!((image[1], image[9]), (1, 0));
        assert!(z.iter().all(|&x| x <= 1));
    }

    #[test]
    fn beyond_radius_fails() {
        let s = shared();
        let c = s.encode(&message(), &stuck()).unwrap();
        let f = field();
        let mut failures = 0;
        for i in 0..15 {
            for j in i + 1..15 {
                let mut y = c.clone();
                y[i] = f.add(y[i], 1);
                y[j] = f.add(y[j], 2);
                match s.decode(&y) {
                    Err(Error::DecodeFailure { t: 1 }) => failures += 1,
                    Ok(m) => assert_ne!(m, message()),
                    Err(e) => panic!("{e}"),
                }
            }
        }
        assert!(failures > 0);
    }

    #[test]
    fn build_rejects_large_u_and_t() {
        let six = PsmcParams { u: 6, ..PARAMS };
        assert_eq!(
            PsmcScheme::build(&field(), six, &h0(), &p()).unwrap_err(),
            Error::MaskingDistanceTooSmall { d0: 3, needed: 4 }
        );
        let two = PsmcParams { t: 2, ..PARAMS };
        assert!(matches!(
            PsmcScheme::build(&field(), two, &h0(), &p()),
            Err(Error::CodeDistanceTooSmall { d: 3, needed: 5 })
        ));
    }

    #[test]
    fn pigeonhole_bound_exhaustive_gf4() {
        let f = field();
        for u in 0..=6usize {
            let positions: Vec<usize> = (0..u).collect();
            for idx in 0..4u32.pow(u as u32) {
                let base: Vec<u32> = (0..u).map(|i| (idx >> (2 * i)) & 3).collect();
                let (_, count) = select_coset_shift(&f, &base, &positions).unwrap();
                assert!(count <= 2 * u / 4, "u={u} base={base:?}");
            }
        }
    }

    #[test]
    fn prior_code_distance_matches_columns() {
        let code = LinearCode::from_generator(prior_generator()).unwrap();
        assert_eq!(code.min_dependent_columns(3, 1 << 20).unwrap(), Some(3));
    }

    fn message_strategy() -> impl Strategy<Value = Message> {
        (
            proptest::collection::vec(0u32..4, 6),
            proptest::collection::vec(prop_oneof![Just(0u32), Just(2u32)], 4),
        )
            .prop_map(|(free, restricted)| Message { free, restricted })
    }

    fn stuck_strategy() -> impl Strategy<Value = StuckProfile> {
        proptest::sample::subsequence((0..15).collect::<Vec<usize>>(), 0..=4)
            .prop_map(|p| StuckProfile::uniform(15, p, 1).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn encode_invariants(msg in message_strategy(), stuck in stuck_strategy(), pos in 0usize..15, e in 0u32..4) {
            let s = shared();
            let f = field();
            let enc = s.encode_detailed(&msg, &stuck).unwrap();
            let c = &enc.codeword;
            prop_assert!(stuck.admits(c));
            prop_assert!(s.code().syndrome(c).unwrap().iter().all(|&x| x == 0));
            prop_assert!(enc.binary_stuck <= s.u0());
            // adding the binary correction never pulls a non-binary entry into GF(2)
            let base_plus_shift: Vec<u32> = {
                let correction = s.h0().vec_mul(&enc.masking_vector).unwrap();
                c.iter().enumerate().map(|(i, &x)| if i < 14 { f.sub(x, correction[i]) } else { x }).collect()
            };
            for i in 0..15 {
                if base_plus_shift[i] > 1 {
                    prop_assert!(c[i] > 1);
                }
            }
            let mut y = c.clone();
            y[pos] = f.add(y[pos], e);
            prop_assert_eq!(s.decode(&y).unwrap(), msg);
        }
    }

    #[test]
    fn labels() {
        assert_eq!(power_label(4, 16), "4^8");
        assert_eq!(power_label(4, 15), "2^15");
        assert_eq!(power_label(3, 4), "2^4");
    }
}
