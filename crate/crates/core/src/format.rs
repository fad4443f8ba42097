//! Plain-text formats for matrices, schemes and vectors.
//!
//! A matrix file is a field line (`field <p> <λ> <modulus>`), a
//! `<rows> <cols>` line, then one line per row of decimal element values.
//! A scheme file is a field line, an `n u t l k1 r` line, then the H0 and P
//! matrices as complete matrix blocks. `#` starts a comment; blank lines are
//! ignored.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::psmc::{PsmcParams, PsmcScheme};

/// Content lines with their 1-based source line numbers.
struct Lines<'a> {
    inner: Box<dyn Iterator<Item = (usize, &'a str)> + 'a>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Lines<'a> {
        let inner = text.lines().enumerate().filter_map(|(i, raw)| {
            let line = raw.split('#').next().unwrap_or("").trim();
            (!line.is_empty()).then_some((i + 1, line))
        });
        Lines {
            inner: Box::new(inner),
        }
    }

    fn next_line(&mut self, what: &str) -> Result<(usize, &'a str)> {
        self.inner.next().ok_or_else(|| Error::Parse {
            line: 0,
            msg: format!("unexpected end of input, expected {what}"),
        })
    }

    fn finish(mut self) -> Result<()> {
        match self.inner.next() {
            None => Ok(()),
            Some((line, _)) => Err(Error::Parse {
                line,
                msg: "trailing content".into(),
            }),
        }
    }
}

fn parse_numbers<T: std::str::FromStr>(line: usize, text: &str) -> Result<Vec<T>> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse().map_err(|_| Error::Parse {
                line,
                msg: format!("'{tok}' is not a non-negative integer"),
            })
        })
        .collect()
}

fn at_line(line: usize, e: Error) -> Error {
    match e {
        Error::Parse { .. } => e,
        other => Error::Parse {
            line,
            msg: other.to_string(),
        },
    }
}

fn read_matrix_block(lines: &mut Lines<'_>) -> Result<Matrix> {
    let (fl, field_line) = lines.next_line("field line")?;
    let field = Field::parse_spec_line(field_line).map_err(|e| at_line(fl, e))?;
    let (dl, dims) = lines.next_line("'<rows> <cols>' line")?;
    let dims: Vec<usize> = parse_numbers(dl, dims)?;
    if dims.len() != 2 {
        return Err(Error::Parse {
            line: dl,
            msg: "expected '<rows> <cols>'".into(),
        });
    }
    let (rows, cols) = (dims[0], dims[1]);
    let mut data = Vec::with_capacity(rows * cols);
    for _ in 0..rows {
        let (rl, row) = lines.next_line("matrix row")?;
        let values: Vec<u32> = parse_numbers(rl, row)?;
        if values.len() != cols {
            return Err(Error::Parse {
                line: rl,
                msg: format!("row has {} entries, expected {cols}", values.len()),
            });
        }
        for &v in &values {
            field.check(v).map_err(|e| at_line(rl, e))?;
        }
        data.extend(values);
    }
    Matrix::from_vec(&field, rows, cols, data)
}

pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let mut lines = Lines::new(text);
    let m = read_matrix_block(&mut lines)?;
    lines.finish()?;
    Ok(m)
}

pub fn write_matrix(m: &Matrix) -> String {
    let mut out = format!("{}\n{} {}\n", m.field().spec_line(), m.rows(), m.cols());
    for r in 0..m.rows() {
        out.push_str(&format_vector(m.row(r)));
        out.push('\n');
    }
    out
}

/// Unvalidated contents of a scheme file.
#[derive(Clone, Debug)]
pub struct SchemeFile {
    pub field: Field,
    pub params: PsmcParams,
    pub h0: Matrix,
    pub p: Matrix,
}

impl SchemeFile {
    pub fn build(&self) -> Result<PsmcScheme> {
        PsmcScheme::build(&self.field, self.params, &self.h0, &self.p)
    }
}

pub fn parse_scheme(text: &str) -> Result<SchemeFile> {
    let mut lines = Lines::new(text);
    let (fl, field_line) = lines.next_line("field line")?;
    let field = Field::parse_spec_line(field_line).map_err(|e| at_line(fl, e))?;
    let (pl, params) = lines.next_line("'n u t l k1 r' line")?;
    let v: Vec<usize> = parse_numbers(pl, params)?;
    if v.len() != 6 {
        return Err(Error::Parse {
            line: pl,
            msg: format!("expected 6 parameters 'n u t l k1 r', found {}", v.len()),
        });
    }
    let params = PsmcParams {
        n: v[0],
        u: v[1],
        t: v[2],
        l: v[3],
        k1: v[4],
        r: v[5],
    };
    let h0 = read_matrix_block(&mut lines)?;
    let p = read_matrix_block(&mut lines)?;
    lines.finish()?;
    Ok(SchemeFile {
        field,
        params,
        h0,
        p,
    })
}

pub fn write_scheme(field: &Field, params: PsmcParams, h0: &Matrix, p: &Matrix) -> String {
    let mut out = String::new();
    let PsmcParams { n, u, t, l, k1, r } = params;
    let _ = writeln!(out, "{}", field.spec_line());
    let _ = writeln!(out, "{n} {u} {t} {l} {k1} {r}");
    out.push_str("# H0\n");
    out.push_str(&write_matrix(h0));
    out.push_str("# P\n");
    out.push_str(&write_matrix(p));
    out
}

pub fn format_vector(v: &[u32]) -> String {
    v.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

pub fn parse_vector(line: &str) -> Result<Vec<u32>> {
    parse_numbers(1, line)
}

/// All content lines of a vector file, one vector per line.
pub fn parse_vectors(text: &str) -> Result<Vec<Vec<u32>>> {
    let mut lines = Lines::new(text);
    let mut out = Vec::new();
    for (n, line) in lines.inner.by_ref() {
        out.push(parse_numbers(n, line)?);
    }
    Ok(out)
}

/// Comma-separated list of indices, e.g. `1,2,9,14`. Empty input is empty.
pub fn parse_index_list(text: &str) -> Result<Vec<usize>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|tok| {
            tok.trim().parse().map_err(|_| Error::Parse {
                line: 1,
                msg: format!("'{tok}' is not an index"),
            })
        })
        .collect()
}
