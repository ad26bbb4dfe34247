//! Plain-text matrix format for kernels and random variables.
//!
//! ```text
//! # comment lines start with '#'; blank lines are ignored
//! kernel <rows> <cols>
//! domain <p_0> ... <p_{rows-1}>
//! codomain <q_0> ... <q_{cols-1}>
//! <k(0|0)> ... <k(cols-1|0)>
//! ...                                  (one line per domain outcome)
//! ```
//!
//! ```text
//! rv <size>
//! weights <p_0> ... <p_{size-1}>
//! values <f_0> ... <f_{size-1}>
//! ```
//!
//! ```text
//! vrv <size> <dim>
//! weights <p_0> ... <p_{size-1}>
//! <G_0 coordinates>                    (one line per outcome)
//! ```
//!
//! Fields are separated by ASCII whitespace. Numbers are written with the
//! scalar's `Display`: exact fractions print as `num/den` (or an integer), so
//! rational files round-trip bit-exactly; floats print the shortest string
//! that parses back to the same double.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::prob::{ProbSpace, RandomVar, VecRandomVar};
use crate::scalar::Scalar;

fn join<S: Scalar>(xs: &[S]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn write_kernel<S: Scalar>(k: &Kernel<S>) -> String {
    let mut out = String::new();
    writeln!(out, "kernel {} {}", k.n_rows(), k.n_cols()).unwrap();
    writeln!(out, "domain {}", join(k.domain().weights())).unwrap();
    writeln!(out, "codomain {}", join(k.codomain().weights())).unwrap();
    for x in 0..k.n_rows() {
        writeln!(out, "{}", join(k.row(x))).unwrap();
    }
    out
}

pub fn write_rv<S: Scalar>(f: &RandomVar<S>) -> String {
    format!(
        "rv {}\nweights {}\nvalues {}\n",
        f.space().size(),
        join(f.space().weights()),
        join(f.values())
    )
}

pub fn write_vec_rv<S: Scalar>(g: &VecRandomVar<S>) -> String {
    let mut out = format!(
        "vrv {} {}\nweights {}\n",
        g.space().size(),
        g.dim(),
        join(g.space().weights())
    );
    for v in g.values() {
        writeln!(out, "{}", join(v)).unwrap();
    }
    out
}

struct Lines<'a> {
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = (usize, &'a str)> + 'a> = Box::new(
            text.lines()
                .enumerate()
                .map(|(i, l)| (i + 1, l.trim()))
                .filter(|(_, l)| !l.is_empty() && !l.starts_with('#')),
        );
        Lines {
            inner: it.peekable(),
        }
    }

    fn next_line(&mut self, what: &str) -> Result<(usize, Vec<&'a str>)> {
        match self.inner.next() {
            Some((n, l)) => Ok((n, l.split_whitespace().collect())),
            None => Err(Error::Parse {
                line: 0,
                message: format!("unexpected end of input, expected {what}"),
            }),
        }
    }

    fn finish(&mut self) -> Result<()> {
        match self.inner.next() {
            None => Ok(()),
            Some((line, _)) => Err(Error::Parse {
                line,
                message: "trailing content".into(),
            }),
        }
    }
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_nums<S: Scalar>(line: usize, fields: &[&str], expected: usize) -> Result<Vec<S>> {
    if fields.len() != expected {
        return Err(perr(
            line,
            format!("expected {expected} numbers, found {}", fields.len()),
        ));
    }
    fields
        .iter()
        .map(|f| S::parse_text(f).ok_or_else(|| perr(line, format!("bad number `{f}`"))))
        .collect()
}

fn parse_usize(line: usize, s: Option<&&str>, what: &str) -> Result<usize> {
    s.and_then(|s| s.parse().ok())
        .filter(|&n: &usize| n > 0)
        .ok_or_else(|| perr(line, format!("expected positive integer {what}")))
}

fn header<'a>(
    lines: &mut Lines<'a>,
    keyword: &str,
    n_args: usize,
) -> Result<(usize, Vec<usize>)> {
    let (line, fields) = lines.next_line(keyword)?;
    if fields.first() != Some(&keyword) || fields.len() != n_args + 1 {
        return Err(perr(line, format!("expected `{keyword}` header")));
    }
    let args = (0..n_args)
        .map(|i| parse_usize(line, fields.get(i + 1), "size"))
        .collect::<Result<_>>()?;
    Ok((line, args))
}

fn labelled<S: Scalar>(lines: &mut Lines<'_>, label: &str, n: usize) -> Result<(usize, Vec<S>)> {
    let (line, fields) = lines.next_line(label)?;
    if fields.first() != Some(&label) {
        return Err(perr(line, format!("expected `{label}` line")));
    }
    Ok((line, parse_nums(line, &fields[1..], n)?))
}

fn space_at<S: Scalar>(line: usize, w: Vec<S>, tol: f64) -> Result<ProbSpace<S>> {
    ProbSpace::with_tolerance(w, tol).map_err(|e| perr(line, e.to_string()))
}

pub fn read_kernel<S: Scalar>(text: &str, tol: f64) -> Result<Kernel<S>> {
    let mut lines = Lines::new(text);
    let (_, sizes) = header(&mut lines, "kernel", 2)?;
    let (n, m) = (sizes[0], sizes[1]);
    let (dl, dw) = labelled(&mut lines, "domain", n)?;
    let (cl, cw) = labelled(&mut lines, "codomain", m)?;
    let domain = space_at(dl, dw, tol)?;
    let codomain = space_at(cl, cw, tol)?;
    let mut rows = Vec::with_capacity(n);
    let mut last = cl;
    for _ in 0..n {
        let (line, fields) = lines.next_line("kernel row")?;
        rows.push(parse_nums(line, &fields, m)?);
        last = line;
    }
    lines.finish()?;
    Kernel::new(rows, &domain, &codomain).map_err(|e| perr(last, e.to_string()))
}

pub fn read_rv<S: Scalar>(text: &str, tol: f64) -> Result<RandomVar<S>> {
    let mut lines = Lines::new(text);
    let (_, sizes) = header(&mut lines, "rv", 1)?;
    let (wl, w) = labelled(&mut lines, "weights", sizes[0])?;
    let space = space_at(wl, w, tol)?;
    let (_, values) = labelled(&mut lines, "values", sizes[0])?;
    lines.finish()?;
    RandomVar::new(&space, values)
}

pub fn read_vec_rv<S: Scalar>(text: &str, tol: f64) -> Result<VecRandomVar<S>> {
    let mut lines = Lines::new(text);
    let (_, sizes) = header(&mut lines, "vrv", 2)?;
    let (n, d) = (sizes[0], sizes[1]);
    let (wl, w) = labelled(&mut lines, "weights", n)?;
    let space = space_at(wl, w, tol)?;
    let mut values = Vec::with_capacity(n);
    for _ in 0..n {
        let (line, fields) = lines.next_line("vector row")?;
        values.push(parse_nums(line, &fields, d)?);
    }
    lines.finish()?;
    VecRandomVar::new(&space, values)
}
