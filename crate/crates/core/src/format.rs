//! Line-oriented text format for circuits and scalar matrices.
//!
//! Circuit files:
//!
//! ```text
//! sps field=Q nvars=2        # field is one of Q, Qi, F <p>
//! term 1 : [0,1,1] * [0,1,-1]
//! ```
//!
//! Each form is `[c0, c1, ..., cn]` — the constant first, then one
//! coefficient per variable. `#` starts a comment; blank lines are ignored.
//!
//! Scalar literals: rationals `a` or `a/b` (b > 0); Gaussian rationals
//! `a/b`, `c/di` or `a/b+c/di` (minus signs allowed); prime-field values are
//! integers, reduced mod p on parse.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::circuit::{Circuit, LinearForm, ProductTerm};
use crate::error::{Error, Result};
use crate::scalar::{FieldDescriptor, Scalar};

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(idx) => &line[..idx],
        None => line,
    }
}

fn parse_signed_int(s: &str) -> Option<BigInt> {
    if s.is_empty() {
        return None;
    }
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let (num_s, den_s) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let num = parse_signed_int(num_s)?;
    let den = match den_s {
        Some(d) => {
            // The denominator is a bare positive integer; signs live on the
            // numerator only.
            if !d.bytes().all(|b| b.is_ascii_digit()) || d.is_empty() {
                return None;
            }
            let v: BigInt = d.parse().ok()?;
            if v.is_zero() {
                return None;
            }
            v
        }
        None => BigInt::one(),
    };
    Some(BigRational::new(num, den))
}

fn parse_gaussian(s: &str) -> Option<(BigRational, BigRational)> {
    let Some(body) = s.strip_suffix('i') else {
        return Some((parse_rational(s)?, BigRational::zero()));
    };
    let bytes = body.as_bytes();
    // Rightmost +/- that follows a digit separates the real part from the
    // imaginary part; a leading sign or the sign of a denominator never
    // matches because those are not digit-preceded.
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1].is_ascii_digit());
    match split {
        Some(idx) => Some((parse_rational(&body[..idx])?, parse_rational(&body[idx..])?)),
        None => Some((BigRational::zero(), parse_rational(body)?)),
    }
}

/// Parse one scalar literal for the given field. `None` means the literal is
/// not valid for that field.
pub fn parse_scalar(literal: &str, field: FieldDescriptor) -> Option<Scalar> {
    match field {
        FieldDescriptor::Q => Some(Scalar::Rational(parse_rational(literal)?)),
        FieldDescriptor::Qi => {
            let (re, im) = parse_gaussian(literal)?;
            Some(Scalar::gaussian(re, im))
        }
        FieldDescriptor::Fp(p) => {
            let v = parse_signed_int(literal)?;
            Some(Scalar::big_integer(&v, FieldDescriptor::Fp(p)))
        }
    }
}

fn scalar_or_err(literal: &str, field: FieldDescriptor, line: usize) -> Result<Scalar> {
    parse_scalar(literal, field).ok_or_else(|| Error::FieldMismatch {
        line,
        literal: literal.to_string(),
        field: field.to_string(),
    })
}

/// Whitespace tokens together with their 1-based starting columns.
fn tokens_with_cols(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn parse_header(line: &str, line_no: usize) -> Result<(FieldDescriptor, usize)> {
    let tokens = tokens_with_cols(line);
    let mut it = tokens.iter();
    match it.next() {
        Some(&(_, "sps")) => {}
        Some(&(col, tok)) => {
            return Err(parse_error(
                line_no,
                col,
                format!("expected header keyword `sps`, found `{tok}`"),
            ))
        }
        None => return Err(parse_error(line_no, 1, "empty header line")),
    }
    let Some(&(fcol, ftok)) = it.next() else {
        return Err(parse_error(line_no, 1, "missing `field=` in header"));
    };
    let Some(fvalue) = ftok.strip_prefix("field=") else {
        return Err(parse_error(line_no, fcol, "expected `field=<F>`"));
    };
    let field = match fvalue {
        "Q" => FieldDescriptor::Q,
        "Qi" => FieldDescriptor::Qi,
        "F" => {
            let Some(&(pcol, ptok)) = it.next() else {
                return Err(parse_error(line_no, fcol, "`field=F` needs a prime"));
            };
            let p: u64 = ptok
                .parse()
                .map_err(|_| parse_error(line_no, pcol, format!("invalid prime `{ptok}`")))?;
            FieldDescriptor::prime_field(p)?
        }
        other => {
            return Err(parse_error(
                line_no,
                fcol,
                format!("unknown field `{other}` (expected Q, Qi or F <p>)"),
            ))
        }
    };
    let Some(&(ncol, ntok)) = it.next() else {
        return Err(parse_error(line_no, 1, "missing `nvars=` in header"));
    };
    let Some(nvalue) = ntok.strip_prefix("nvars=") else {
        return Err(parse_error(line_no, ncol, "expected `nvars=<n>`"));
    };
    let nvars: usize = nvalue
        .parse()
        .map_err(|_| parse_error(line_no, ncol, format!("invalid variable count `{nvalue}`")))?;
    if let Some(&(col, tok)) = it.next() {
        return Err(parse_error(
            line_no,
            col,
            format!("unexpected token `{tok}` after header"),
        ));
    }
    Ok((field, nvars))
}

struct LineCursor<'a> {
    line: &'a str,
    pos: usize,
    line_no: usize,
}

impl<'a> LineCursor<'a> {
    fn new(line: &'a str, line_no: usize) -> Self {
        LineCursor {
            line,
            pos: 0,
            line_no,
        }
    }

    fn col(&self) -> usize {
        self.pos + 1
    }

    fn skip_ws(&mut self) {
        let rest = &self.line[self.pos..];
        let trimmed = rest.trim_start();
        self.pos += rest.len() - trimmed.len();
    }

    fn peek(&self) -> Option<char> {
        self.line[self.pos..].chars().next()
    }

    fn expect(&mut self, ch: char) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == ch => {
                self.pos += c.len_utf8();
                Ok(())
            }
            Some(c) => Err(parse_error(
                self.line_no,
                self.col(),
                format!("expected `{ch}`, found `{c}`"),
            )),
            None => Err(parse_error(
                self.line_no,
                self.col(),
                format!("expected `{ch}`, found end of line"),
            )),
        }
    }

    /// Next run of non-whitespace characters, stopping before `stop`.
    fn token(&mut self, stop: &[char]) -> &'a str {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_whitespace() || stop.contains(&c) {
                break;
            }
            self.pos += c.len_utf8();
        }
        &self.line[start..self.pos]
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.line.len()
    }
}

fn parse_form(cursor: &mut LineCursor, field: FieldDescriptor, nvars: usize) -> Result<LinearForm> {
    cursor.expect('[')?;
    let mut entries = Vec::new();
    loop {
        let lit = cursor.token(&[',', ']']).trim();
        if lit.is_empty() {
            return Err(parse_error(
                cursor.line_no,
                cursor.col(),
                "expected a scalar literal",
            ));
        }
        entries.push(scalar_or_err(lit, field, cursor.line_no)?);
        cursor.skip_ws();
        match cursor.peek() {
            Some(',') => {
                cursor.pos += 1;
            }
            Some(']') => {
                cursor.pos += 1;
                break;
            }
            _ => {
                return Err(parse_error(
                    cursor.line_no,
                    cursor.col(),
                    "expected `,` or `]` in form",
                ))
            }
        }
    }
    if entries.len() != nvars + 1 {
        return Err(Error::Arity {
            line: cursor.line_no,
            expected: nvars + 1,
            found: entries.len(),
        });
    }
    let constant = entries.remove(0);
    Ok(LinearForm::new(constant, entries))
}

fn parse_term_line(
    line: &str,
    line_no: usize,
    field: FieldDescriptor,
    nvars: usize,
) -> Result<ProductTerm> {
    let mut cursor = LineCursor::new(line, line_no);
    let kw = cursor.token(&[]);
    if kw != "term" {
        return Err(parse_error(
            line_no,
            cursor.col() - kw.len(),
            format!("expected `term`, found `{kw}`"),
        ));
    }
    let lit = cursor.token(&[':']);
    if lit.is_empty() {
        return Err(parse_error(
            line_no,
            cursor.col(),
            "missing term multiplier",
        ));
    }
    let multiplier = scalar_or_err(lit, field, line_no)?;
    cursor.expect(':')?;
    let mut forms = vec![parse_form(&mut cursor, field, nvars)?];
    while !cursor.at_end() {
        cursor.expect('*')?;
        forms.push(parse_form(&mut cursor, field, nvars)?);
    }
    Ok(ProductTerm::new(multiplier, forms))
}

/// Parse a circuit from its text representation.
pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut header: Option<(FieldDescriptor, usize)> = None;
    let mut terms = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        match header {
            None => header = Some(parse_header(line, line_no)?),
            Some((field, nvars)) => {
                terms.push(parse_term_line(line, line_no, field, nvars)?);
            }
        }
    }
    let Some((field, nvars)) = header else {
        return Err(parse_error(1, 1, "missing `sps` header line"));
    };
    if terms.is_empty() {
        return Err(parse_error(
            last_line,
            1,
            "circuit has no terms (at least one `term` line required)",
        ));
    }
    Circuit::new(field, nvars, terms)
}

/// Canonical text rendering; `parse_circuit` returns a structurally
/// identical circuit.
pub fn serialize_circuit(c: &Circuit) -> String {
    let mut out = format!("sps field={} nvars={}\n", c.field(), c.nvars());
    for term in c.terms() {
        out.push_str(&format!("term {} :", term.multiplier));
        for (i, form) in term.forms.iter().enumerate() {
            if i > 0 {
                out.push_str(" *");
            }
            out.push_str(" [");
            out.push_str(&form.constant.to_string());
            for coeff in &form.coeffs {
                out.push(',');
                out.push_str(&coeff.to_string());
            }
            out.push(']');
        }
        out.push('\n');
    }
    out
}

/// Parse a square scalar matrix. First line: `<dim> <field>`; then one row
/// per line, entries whitespace-separated.
pub fn parse_matrix(text: &str) -> Result<(Vec<Vec<Scalar>>, FieldDescriptor)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l)))
        .filter(|(_, l)| !l.trim().is_empty());
    let Some((line_no, head)) = lines.next() else {
        return Err(parse_error(1, 1, "empty matrix file"));
    };
    let tokens = tokens_with_cols(head);
    if tokens.is_empty() {
        return Err(parse_error(line_no, 1, "missing matrix header"));
    }
    let dim: usize = tokens[0].1.parse().map_err(|_| {
        parse_error(
            line_no,
            tokens[0].0,
            format!("invalid dimension `{}`", tokens[0].1),
        )
    })?;
    if dim == 0 {
        return Err(parse_error(
            line_no,
            tokens[0].0,
            "dimension must be positive",
        ));
    }
    let field = match tokens.get(1).map(|t| t.1) {
        Some("Q") => FieldDescriptor::Q,
        Some("Qi") => FieldDescriptor::Qi,
        Some("F") => {
            let Some(&(pcol, ptok)) = tokens.get(2) else {
                return Err(parse_error(line_no, 1, "`F` needs a prime"));
            };
            let p: u64 = ptok
                .parse()
                .map_err(|_| parse_error(line_no, pcol, format!("invalid prime `{ptok}`")))?;
            FieldDescriptor::prime_field(p)?
        }
        _ => {
            return Err(parse_error(
                line_no,
                1,
                "matrix header must be `<dim> <field>` with field Q, Qi or F <p>",
            ))
        }
    };
    let mut rows = Vec::with_capacity(dim);
    for _ in 0..dim {
        let Some((row_line, row)) = lines.next() else {
            return Err(parse_error(
                last_or(text),
                1,
                format!("expected {dim} matrix rows"),
            ));
        };
        let entries: Result<Vec<Scalar>> = tokens_with_cols(row)
            .into_iter()
            .map(|(_, lit)| scalar_or_err(lit, field, row_line))
            .collect();
        let entries = entries?;
        if entries.len() != dim {
            return Err(parse_error(
                row_line,
                1,
                format!("row has {} entries, expected {dim}", entries.len()),
            ));
        }
        rows.push(entries);
    }
    if let Some((line_no, _)) = lines.next() {
        return Err(parse_error(
            line_no,
            1,
            "trailing content after matrix rows",
        ));
    }
    Ok((rows, field))
}

fn last_or(text: &str) -> usize {
    text.lines().count().max(1)
}
