//! Line-oriented document format for keys and messages.
//!
//! Every document starts with the header `MPKC v1` and a `role=` line, then a
//! fixed per-role schema. The parsers are strict by design: fields outside the
//! schema, out-of-range residues, non-prime moduli and trailing content are
//! all rejected with line-numbered errors. Extending the format means bumping
//! the version, not tolerating stray fields.
//!
//! ```text
//! MPKC v1                  MPKC v1                  MPKC v1
//! role=public              role=secret              role=message
//! p=47                     p=47                     p=47
//! n=3                      n=3                      n=3
//! matrix K                 l=5                      pad=0
//! <n rows>                 exp_g=9                  matrix K_j
//! matrix K_l               exp_h=13                 <n rows>
//! <n rows>                 matrix G                 block <c1> … <cn>
//!                          <n rows>                 …
//!                          matrix H
//!                          <n rows>
//! ```
//!
//! Secret documents store both the exponents and the matrices they define;
//! the parser recomputes each matrix and rejects documents where the two
//! disagree.

use crate::error::{ParseError, ParseErrorKind, Result};
use crate::fib::FibPower;
use crate::matrix::ResidueMatrix;
use crate::primes::is_prime;
use crate::protocol::{CipherMessage, PublicKey, SecretKey, MIN_MODULUS};

const HEADER: &str = "MPKC v1";

pub fn serialize_public_key(key: &PublicKey) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push_str("\nrole=public\n");
    out.push_str(&format!("p={}\nn={}\n", key.modulus(), key.order()));
    push_matrix(&mut out, "K", key.seed());
    push_matrix(&mut out, "K_l", key.wrapped());
    out
}

pub fn serialize_secret_key(key: &SecretKey) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push_str("\nrole=secret\n");
    out.push_str(&format!("p={}\nn={}\n", key.modulus(), key.order()));
    out.push_str(&format!(
        "l={}\nexp_g={}\nexp_h={}\n",
        key.sum_len(),
        key.left().exponent(),
        key.right().exponent()
    ));
    push_matrix(&mut out, "G", key.left().matrix());
    push_matrix(&mut out, "H", key.right().matrix());
    out
}

pub fn serialize_message(message: &CipherMessage) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push_str("\nrole=message\n");
    out.push_str(&format!("p={}\nn={}\n", message.modulus(), message.order()));
    out.push_str(&format!("pad={}\n", message.pad_count()));
    push_matrix(&mut out, "K_j", message.wrapped_seed());
    for block in message.blocks() {
        out.push_str("block");
        for v in block {
            out.push_str(&format!(" {v}"));
        }
        out.push('\n');
    }
    out
}

fn push_matrix(out: &mut String, name: &str, matrix: &ResidueMatrix) {
    out.push_str(&format!("matrix {name}\n"));
    for row in matrix.rows() {
        let line: Vec<String> = row.iter().map(u64::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
}

pub fn parse_public_key(text: &str) -> Result<PublicKey> {
    let mut cur = Cursor::new(text);
    cur.header()?;
    cur.role("public")?;
    let (p, n) = cur.modulus_and_order()?;
    let (seed_line, seed) = cur.matrix("K", n, p)?;
    let (_, wrapped) = cur.matrix("K_l", n, p)?;
    cur.finish()?;
    PublicKey::new(seed, wrapped)
        .map_err(|e| ParseError::new(seed_line, ParseErrorKind::Invalid(e.to_string())).into())
}

pub fn parse_secret_key(text: &str) -> Result<SecretKey> {
    let mut cur = Cursor::new(text);
    cur.header()?;
    cur.role("secret")?;
    let (p, n) = cur.modulus_and_order()?;
    let (l_line, l_tok) = cur.field("l")?;
    let sum_len: u64 = parse_int(&l_tok, l_line)?;
    if sum_len == 0 {
        return Err(ParseError::new(
            l_line,
            ParseErrorKind::Invalid("sum length must be at least 1".into()),
        )
        .into());
    }
    let (eg_line, eg_tok) = cur.field("exp_g")?;
    let exp_g: i64 = parse_int(&eg_tok, eg_line)?;
    let (eh_line, eh_tok) = cur.field("exp_h")?;
    let exp_h: i64 = parse_int(&eh_tok, eh_line)?;
    let (g_line, g) = cur.matrix("G", n, p)?;
    let (h_line, h) = cur.matrix("H", n, p)?;
    cur.finish()?;

    let left = rebuild_power(n, exp_g, p, &g, "G", g_line, eg_line)?;
    let right = rebuild_power(n, exp_h, p, &h, "H", h_line, eh_line)?;
    SecretKey::new(sum_len, left, right)
        .map_err(|e| ParseError::new(l_line, ParseErrorKind::Invalid(e.to_string())).into())
}

fn rebuild_power(
    order: usize,
    exponent: i64,
    modulus: u64,
    stored: &ResidueMatrix,
    name: &'static str,
    matrix_line: usize,
    exp_line: usize,
) -> Result<FibPower> {
    let power = FibPower::new(order, exponent, modulus)
        .map_err(|e| ParseError::new(exp_line, ParseErrorKind::Invalid(e.to_string())))?;
    if power.matrix() != stored {
        return Err(ParseError::new(
            matrix_line,
            ParseErrorKind::MatrixExponentMismatch(name),
        )
        .into());
    }
    Ok(power)
}

pub fn parse_message(text: &str) -> Result<CipherMessage> {
    let mut cur = Cursor::new(text);
    cur.header()?;
    cur.role("message")?;
    let (p, n) = cur.modulus_and_order()?;
    let (pad_line, pad_tok) = cur.field("pad")?;
    let pad_count: usize = parse_int(&pad_tok, pad_line)?;
    let (kj_line, wrapped_seed) = cur.matrix("K_j", n, p)?;
    let mut blocks = Vec::new();
    while let Some((lineno, line)) = cur.next_line() {
        let Some(rest) = line.strip_prefix("block") else {
            return Err(ParseError::new(
                lineno,
                ParseErrorKind::ExpectedField { expected: "block", got: line.to_string() },
            )
            .into());
        };
        let toks: Vec<&str> = rest.split_whitespace().collect();
        if toks.len() != n {
            return Err(ParseError::new(
                lineno,
                ParseErrorKind::RowLength { expected: n, got: toks.len() },
            )
            .into());
        }
        let mut block = Vec::with_capacity(n);
        for tok in toks {
            let v: u64 = parse_int(tok, lineno)?;
            if v >= p {
                return Err(ParseError::new(
                    lineno,
                    ParseErrorKind::EntryOutOfRange { entry: v, modulus: p },
                )
                .into());
            }
            block.push(v);
        }
        blocks.push(block);
    }
    CipherMessage::new(wrapped_seed, blocks, pad_count)
        .map_err(|e| ParseError::new(kj_line, ParseErrorKind::Invalid(e.to_string())).into())
}

struct Cursor<'a> {
    lines: std::iter::Enumerate<std::str::Lines<'a>>,
    /// Line count of the document, for end-of-input reporting.
    total: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Self { lines: text.lines().enumerate(), total: text.lines().count() }
    }

    fn next_line(&mut self) -> Option<(usize, &'a str)> {
        self.lines.next().map(|(i, l)| (i + 1, l))
    }

    fn expect_line(&mut self) -> std::result::Result<(usize, &'a str), ParseError> {
        self.next_line()
            .ok_or_else(|| ParseError::new(self.total + 1, ParseErrorKind::UnexpectedEnd))
    }

    fn header(&mut self) -> Result<()> {
        let (lineno, line) = self.expect_line()?;
        if line != HEADER {
            return Err(ParseError::new(lineno, ParseErrorKind::MissingHeader).into());
        }
        Ok(())
    }

    fn role(&mut self, expected: &'static str) -> Result<()> {
        let (lineno, tok) = self.field("role")?;
        if tok != expected {
            return Err(
                ParseError::new(lineno, ParseErrorKind::WrongRole { expected, got: tok }).into()
            );
        }
        Ok(())
    }

    /// Consume a `key=value` line, rejecting any other field name.
    fn field(&mut self, key: &'static str) -> std::result::Result<(usize, String), ParseError> {
        let (lineno, line) = self.expect_line()?;
        if let Some(value) = line.strip_prefix(key).and_then(|r| r.strip_prefix('=')) {
            return Ok((lineno, value.to_string()));
        }
        let kind = match line.split_once('=') {
            Some((name, _)) if !name.is_empty() && !name.contains(' ') => {
                ParseErrorKind::UnknownField(name.to_string())
            }
            _ => ParseErrorKind::ExpectedField { expected: key, got: line.to_string() },
        };
        Err(ParseError::new(lineno, kind))
    }

    fn modulus_and_order(&mut self) -> Result<(u64, usize)> {
        let (p_line, p_tok) = self.field("p")?;
        let p: u64 = parse_int(&p_tok, p_line)?;
        if !is_prime(p) {
            return Err(ParseError::new(p_line, ParseErrorKind::NotPrime(p)).into());
        }
        if p < MIN_MODULUS {
            return Err(ParseError::new(
                p_line,
                ParseErrorKind::Invalid(format!(
                    "modulus {p} is below the cipher bound {MIN_MODULUS}"
                )),
            )
            .into());
        }
        let (n_line, n_tok) = self.field("n")?;
        let n: usize = parse_int(&n_tok, n_line)?;
        if n < 2 {
            return Err(ParseError::new(
                n_line,
                ParseErrorKind::Invalid(format!("order must be at least 2 (got {n})")),
            )
            .into());
        }
        Ok((p, n))
    }

    /// Consume `matrix <name>` plus its rows; returns the header line number.
    fn matrix(&mut self, name: &str, dim: usize, modulus: u64) -> Result<(usize, ResidueMatrix)> {
        let (header_line, line) = self.expect_line()?;
        let expected = format!("matrix {name}");
        if line != expected {
            let kind = match line.split_once('=') {
                Some((field, _)) if !field.is_empty() && !field.contains(' ') => {
                    ParseErrorKind::UnknownField(field.to_string())
                }
                _ => ParseErrorKind::ExpectedField {
                    expected: "matrix",
                    got: line.to_string(),
                },
            };
            return Err(ParseError::new(header_line, kind).into());
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for _ in 0..dim {
            let (lineno, row) = self.expect_line()?;
            let toks: Vec<&str> = row.split_whitespace().collect();
            if toks.len() != dim {
                return Err(ParseError::new(
                    lineno,
                    ParseErrorKind::RowLength { expected: dim, got: toks.len() },
                )
                .into());
            }
            for tok in toks {
                let v: u64 = parse_int(tok, lineno)?;
                if v >= modulus {
                    return Err(ParseError::new(
                        lineno,
                        ParseErrorKind::EntryOutOfRange { entry: v, modulus },
                    )
                    .into());
                }
                entries.push(v);
            }
        }
        Ok((
            header_line,
            ResidueMatrix::from_entries_unchecked(modulus, dim, entries),
        ))
    }

    fn finish(&mut self) -> Result<()> {
        if let Some((lineno, _)) = self.next_line() {
            return Err(ParseError::new(lineno, ParseErrorKind::TrailingContent).into());
        }
        Ok(())
    }
}

fn parse_int<T: std::str::FromStr>(tok: &str, line: usize) -> std::result::Result<T, ParseError> {
    tok.trim()
        .parse()
        .map_err(|_| ParseError::new(line, ParseErrorKind::BadInteger(tok.to_string())))
}
