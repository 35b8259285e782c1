//! Text grammar for algebra specs:
//!
//! ```text
//! spec  := "M(" n "," m "," q ")" | "GF(" q "," m ")" | "T(" q "," j ")"
//!        | "prod(" spec ("," spec)* ")" | "P(" a ("," a)* ";" m "," q ")"
//! q     := int | int "^" int
//! ```
//!
//! Integers may be written as ranges `a..b` (inclusive); [`expand_ranges`]
//! turns one such text into the list of concrete specs.

use crate::algebra::{parabolic, product, simple_algebra, truncated_poly, AlgebraSpec};
use crate::error::{Error, Result};
use crate::gfield::prime_power;

/// Parsed form of a spec before construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpecAst {
    Simple {
        n: usize,
        m: usize,
        q: u64,
    },
    Field {
        q: u64,
        m: usize,
    },
    Truncated {
        q: u64,
        j: usize,
    },
    Product(Vec<SpecAst>),
    Parabolic {
        blocks: Vec<usize>,
        m: usize,
        q: u64,
    },
}

impl SpecAst {
    pub fn build(&self) -> Result<AlgebraSpec> {
        match self {
            SpecAst::Simple { n, m, q } => simple_algebra(*n, *m, *q),
            SpecAst::Field { q, m } => {
                Ok(simple_algebra(1, *m, *q)?.with_label(format!("GF({q},{m})")))
            }
            SpecAst::Truncated { q, j } => truncated_poly(*q, *j),
            SpecAst::Product(parts) => {
                let built = parts
                    .iter()
                    .map(|p| p.build())
                    .collect::<Result<Vec<_>>>()?;
                product(&built)
            }
            SpecAst::Parabolic { blocks, m, q } => parabolic(blocks, *m, *q),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(tok.as_bytes()) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.err(format!("expected {tok:?}"))
        }
    }

    fn int(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        s.parse().or_else(|_| {
            self.pos = start;
            self.err("integer out of range")
        })
    }

    fn positive(&mut self, what: &str) -> Result<usize> {
        let start = self.pos;
        let v = self.int()?;
        if v == 0 {
            self.pos = start;
            return self.err(format!("{what} must be positive"));
        }
        Ok(v as usize)
    }

    fn q(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        let base = self.int()?;
        let q = if self.eat("^") {
            let e = self.int()?;
            base.checked_pow(e as u32).ok_or(Error::Parse {
                pos: start,
                msg: "q overflows".into(),
            })?
        } else {
            base
        };
        if prime_power(q).is_none() {
            self.pos = start;
            return self.err(format!("{q} is not a prime power"));
        }
        Ok(q)
    }

    fn spec(&mut self) -> Result<SpecAst> {
        self.skip_ws();
        if self.eat("prod(") {
            let mut parts = vec![self.spec()?];
            while self.eat(",") {
                parts.push(self.spec()?);
            }
            self.expect(")")?;
            return Ok(SpecAst::Product(parts));
        }
        if self.eat("GF(") {
            let q = self.q()?;
            self.expect(",")?;
            let m = self.positive("m")?;
            self.expect(")")?;
            return Ok(SpecAst::Field { q, m });
        }
        if self.eat("M(") {
            let n = self.positive("n")?;
            self.expect(",")?;
            let m = self.positive("m")?;
            self.expect(",")?;
            let q = self.q()?;
            self.expect(")")?;
            return Ok(SpecAst::Simple { n, m, q });
        }
        if self.eat("P(") {
            let mut blocks = vec![self.positive("block size")?];
            while self.eat(",") {
                blocks.push(self.positive("block size")?);
            }
            self.expect(";")?;
            let m = self.positive("m")?;
            self.expect(",")?;
            let q = self.q()?;
            self.expect(")")?;
            if blocks.len() < 2 {
                return Err(Error::invalid("a parabolic needs at least two blocks"));
            }
            return Ok(SpecAst::Parabolic { blocks, m, q });
        }
        if self.eat("T(") {
            let q = self.q()?;
            self.expect(",")?;
            let j = self.positive("j")?;
            self.expect(")")?;
            return Ok(SpecAst::Truncated { q, j });
        }
        self.err("expected one of M(, GF(, prod(, P(, T(")
    }
}

pub fn parse_ast(text: &str) -> Result<SpecAst> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let ast = p.spec()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return p.err("trailing input");
    }
    Ok(ast)
}

pub fn parse_spec(text: &str) -> Result<AlgebraSpec> {
    parse_ast(text)?.build()
}

/// Parses `GF(q, m)` as the field tower parameters `(p, e, m)`.
pub fn parse_field(text: &str) -> Result<(u32, u32, u32)> {
    match parse_ast(text)? {
        SpecAst::Field { q, m } => {
            let (p, e) = prime_power(q).expect("validated by the parser");
            Ok((p, e, m as u32))
        }
        _ => Err(Error::Parse {
            pos: 0,
            msg: "expected GF(p^e, m)".into(),
        }),
    }
}

/// Expands every `a..b` integer range; texts without ranges map to themselves.
pub fn expand_ranges(text: &str) -> Result<Vec<String>> {
    let Some(dots) = text.find("..") else {
        return Ok(vec![text.to_string()]);
    };
    let bytes = text.as_bytes();
    let mut start = dots;
    while start > 0 && bytes[start - 1].is_ascii_digit() {
        start -= 1;
    }
    let mut end = dots + 2;
    while end < bytes.len() && bytes[end].is_ascii_digit() {
        end += 1;
    }
    let lo: u64 = text[start..dots].parse().map_err(|_| Error::Parse {
        pos: start,
        msg: "bad range start".into(),
    })?;
    let hi: u64 = text[dots + 2..end].parse().map_err(|_| Error::Parse {
        pos: dots + 2,
        msg: "bad range end".into(),
    })?;
    if lo > hi {
        return Err(Error::Parse {
            pos: start,
            msg: "empty range".into(),
        });
    }
    let mut out = Vec::new();
    for v in lo..=hi {
        let replaced = format!("{}{}{}", &text[..start], v, &text[end..]);
        out.extend(expand_ranges(&replaced)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_examples() {
        assert_eq!(parse_spec("M(2,1,2)").unwrap().dim(), 4);
        let a = parse_spec("prod(GF(2,2),GF(2,2))").unwrap();
        assert_eq!(a.dim(), 4);
        assert_eq!(a.decomposition().unwrap().r(), 2);
        let p = parse_spec("P(1,1;1,3)").unwrap();
        assert_eq!((p.dim(), p.q()), (3, 3));
        assert_eq!(parse_spec("T(2^2,3)").unwrap().q(), 4);
    }

    #[test]
    fn reports_positions() {
        match parse_spec("M(2,1,6)") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_spec("M(2,1"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_spec("Q(1)"),
            Err(Error::Parse { pos: 0, .. })
        ));
        assert!(matches!(
            parse_spec("P(2;1,2)"),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn ranges_expand() {
        assert_eq!(
            expand_ranges("M(2..4,1,2)").unwrap(),
            vec!["M(2,1,2)", "M(3,1,2)", "M(4,1,2)"]
        );
        assert_eq!(expand_ranges("M(1..2,1,2..3)").unwrap().len(), 4);
        assert_eq!(parse_field("GF(2^2, 3)").unwrap(), (2, 2, 3));
    }
}
