use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::arith::{BigF, Rat};
use crate::error::{Error, Result};

/// Real constant built from rationals, π, square roots and rational powers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstExpr {
    Rat(Rat),
    Pi,
    Sqrt(Box<ConstExpr>),
    Add(Box<ConstExpr>, Box<ConstExpr>),
    Sub(Box<ConstExpr>, Box<ConstExpr>),
    Mul(Box<ConstExpr>, Box<ConstExpr>),
    Div(Box<ConstExpr>, Box<ConstExpr>),
    Pow(Box<ConstExpr>, Rat),
    Neg(Box<ConstExpr>),
}

/// Named constants and their definitions.
pub const NAMED_CONSTANTS: [(&str, &str); 5] = [
    ("A", "1 + sqrt(2)"),
    ("B", "1 + sqrt(3)"),
    ("C", "1 + sqrt(6)"),
    ("lambda", "7 + 3*sqrt(6)"),
    ("mu", "sqrt((4*sqrt(6) - 1)/19)"),
];

impl ConstExpr {
    pub fn int(n: i64) -> ConstExpr {
        ConstExpr::Rat(Rat::from(n))
    }

    /// The value when the expression is rational without using π or roots.
    pub fn as_rat(&self) -> Option<Rat> {
        Some(match self {
            ConstExpr::Rat(r) => r.clone(),
            ConstExpr::Pi | ConstExpr::Sqrt(_) => return None,
            ConstExpr::Add(a, b) => &a.as_rat()? + &b.as_rat()?,
            ConstExpr::Sub(a, b) => &a.as_rat()? - &b.as_rat()?,
            ConstExpr::Mul(a, b) => &a.as_rat()? * &b.as_rat()?,
            ConstExpr::Div(a, b) => {
                let d = b.as_rat()?;
                if d.is_zero() {
                    return None;
                }
                &a.as_rat()? / &d
            }
            ConstExpr::Pow(a, e) => {
                if !e.is_integer() {
                    return None;
                }
                let b = a.as_rat()?;
                let k = e.to_i64()? as i32;
                if b.is_zero() && k < 0 {
                    return None;
                }
                b.pow(k)
            }
            ConstExpr::Neg(a) => -a.as_rat()?,
        })
    }

    pub fn eval(&self, prec: u32) -> Result<BigF> {
        let wp = prec + 16;
        Ok(self.eval_at(wp)?.with_prec(prec))
    }

    fn eval_at(&self, p: u32) -> Result<BigF> {
        Ok(match self {
            ConstExpr::Rat(r) => BigF::from_rat(r, p),
            ConstExpr::Pi => BigF::pi(p),
            ConstExpr::Sqrt(a) => {
                let v = a.eval_at(p)?;
                if v.signum() < 0 {
                    return Err(Error::ArgumentOutOfRange);
                }
                v.sqrt()
            }
            ConstExpr::Add(a, b) => &a.eval_at(p)? + &b.eval_at(p)?,
            ConstExpr::Sub(a, b) => &a.eval_at(p)? - &b.eval_at(p)?,
            ConstExpr::Mul(a, b) => &a.eval_at(p)? * &b.eval_at(p)?,
            ConstExpr::Div(a, b) => {
                let d = b.eval_at(p)?;
                if d.is_zero() {
                    return Err(Error::ArgumentOutOfRange);
                }
                &a.eval_at(p)? / &d
            }
            ConstExpr::Pow(a, e) => {
                let v = a.eval_at(p)?;
                if v.signum() <= 0 && !e.is_integer() {
                    if v.is_zero() && e.signum() > 0 {
                        return Ok(BigF::zero(p));
                    }
                    return Err(Error::ArgumentOutOfRange);
                }
                if v.is_zero() && e.signum() < 0 {
                    return Err(Error::ArgumentOutOfRange);
                }
                v.pow_rat(e)
            }
            ConstExpr::Neg(a) => -&a.eval_at(p)?,
        })
    }

    pub fn to_f64(&self) -> Result<f64> {
        Ok(self.eval(64)?.to_f64())
    }
}

// --- parsing -----------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(u64),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let mut v: u64 = 0;
            while i < cs.len() && cs[i].is_ascii_digit() {
                v = v
                    .checked_mul(10)
                    .and_then(|v| v.checked_add(cs[i].to_digit(10).unwrap() as u64))
                    .ok_or_else(|| Error::Parse(format!("number too large in {:?}", s)))?;
                i += 1;
            }
            out.push(Tok::Num(v));
        } else if c.is_alphabetic() {
            let mut id = String::new();
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                id.push(cs[i]);
                i += 1;
            }
            out.push(Tok::Ident(id));
        } else if c == '√' {
            out.push(Tok::Ident("sqrt".to_string()));
            i += 1;
        } else if "+-*/^()·×−".contains(c) {
            let op = match c {
                '·' | '×' => '*',
                '−' => '-',
                _ => c,
            };
            out.push(Tok::Op(op));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected {:?} in {:?}", c, s)));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{} at token {}", what, self.pos))
    }

    // expr := term (('+'|'-') term)*
    fn expr(&mut self) -> Result<ConstExpr> {
        let mut a = self.term()?;
        loop {
            if self.eat('+') {
                a = ConstExpr::Add(Box::new(a), Box::new(self.term()?));
            } else if self.eat('-') {
                a = ConstExpr::Sub(Box::new(a), Box::new(self.term()?));
            } else {
                return Ok(a);
            }
        }
    }

    // term := unary (('*'|'/') unary | implicit-product)*
    fn term(&mut self) -> Result<ConstExpr> {
        let mut a = self.unary()?;
        loop {
            if self.eat('*') {
                a = ConstExpr::Mul(Box::new(a), Box::new(self.unary()?));
            } else if self.eat('/') {
                a = ConstExpr::Div(Box::new(a), Box::new(self.unary()?));
            } else if matches!(self.peek(), Some(Tok::Ident(_)) | Some(Tok::Op('('))) {
                a = ConstExpr::Mul(Box::new(a), Box::new(self.power()?));
            } else {
                return Ok(a);
            }
        }
    }

    fn unary(&mut self) -> Result<ConstExpr> {
        if self.eat('-') {
            return Ok(ConstExpr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    // power := primary ('^' exponent)?
    fn power(&mut self) -> Result<ConstExpr> {
        let base = self.primary()?;
        if self.eat('^') {
            let neg = self.eat('-');
            let e = self.primary()?.as_rat().ok_or_else(|| self.err("exponent must be rational"))?;
            let e = if neg { -e } else { e };
            return Ok(ConstExpr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<ConstExpr> {
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(ConstExpr::Rat(Rat::from_int(v)))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some(Tok::Ident(id)) => {
                self.pos += 1;
                match id.as_str() {
                    "pi" | "π" => Ok(ConstExpr::Pi),
                    "sqrt" => {
                        let arg = if self.peek() == Some(&Tok::Op('(')) { self.primary()? } else { self.power()? };
                        Ok(ConstExpr::Sqrt(Box::new(arg)))
                    }
                    name => {
                        let name = match name {
                            "λ" => "lambda",
                            "μ" => "mu",
                            n => n,
                        };
                        let def = NAMED_CONSTANTS
                            .iter()
                            .find(|(n, _)| *n == name)
                            .ok_or_else(|| Error::Parse(format!("unknown constant {:?}", id)))?;
                        Ok(def.1.parse::<ConstExpr>()?)
                    }
                }
            }
            _ => Err(self.err("expected a value")),
        }
    }
}

impl FromStr for ConstExpr {
    type Err = Error;
    fn from_str(s: &str) -> Result<ConstExpr> {
        let toks = tokenize(s)?;
        let mut p = Parser { toks, pos: 0 };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(p.err("trailing input"));
        }
        Ok(e)
    }
}

fn needs_parens(e: &ConstExpr) -> bool {
    matches!(e, ConstExpr::Add(..) | ConstExpr::Sub(..) | ConstExpr::Neg(_))
        || matches!(e, ConstExpr::Rat(r) if !r.is_integer() || r.is_negative())
}

impl fmt::Display for ConstExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |e: &ConstExpr, f: &mut fmt::Formatter<'_>| -> fmt::Result {
            if needs_parens(e) {
                write!(f, "({})", e)
            } else {
                write!(f, "{}", e)
            }
        };
        match self {
            ConstExpr::Rat(r) => write!(f, "{}", r),
            ConstExpr::Pi => write!(f, "pi"),
            ConstExpr::Sqrt(a) => write!(f, "sqrt({})", a),
            ConstExpr::Add(a, b) => write!(f, "{} + {}", a, b),
            ConstExpr::Sub(a, b) => {
                write!(f, "{} - ", a)?;
                wrap(b, f)
            }
            ConstExpr::Mul(a, b) => {
                wrap(a, f)?;
                write!(f, "*")?;
                wrap(b, f)
            }
            ConstExpr::Div(a, b) => {
                wrap(a, f)?;
                write!(f, "/")?;
                if matches!(**b, ConstExpr::Mul(..) | ConstExpr::Div(..)) {
                    write!(f, "({})", b)
                } else {
                    wrap(b, f)
                }
            }
            ConstExpr::Pow(a, e) => {
                if matches!(**a, ConstExpr::Rat(_) | ConstExpr::Pi | ConstExpr::Sqrt(_)) && !needs_parens(a) {
                    write!(f, "{}", a)?;
                } else {
                    write!(f, "({})", a)?;
                }
                if e.is_integer() && !e.is_negative() {
                    write!(f, "^{}", e)
                } else {
                    write!(f, "^({})", e)
                }
            }
            ConstExpr::Neg(a) => {
                write!(f, "-")?;
                wrap(a, f)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn val(s: &str) -> f64 {
        s.parse::<ConstExpr>().unwrap().to_f64().unwrap()
    }

    #[test]
    fn basic_values() {
        assert!((val("8/(3*pi)") - 0.848_826_363_156_775).abs() < 1e-14);
        assert!((val("sqrt(6)/pi") - 0.779_696_801_233_676).abs() < 1e-14);
        assert!((val("3/2*sqrt(3/pi)") - 1.465_807_535_708_759_8).abs() < 1e-13);
        assert!((val("2*A^(3/2)/pi") - 2.0 * (1.0 + 2f64.sqrt()).powf(1.5) / core::f64::consts::PI).abs() < 1e-13);
        assert!((val("mu") - ((4.0 * 6f64.sqrt() - 1.0) / 19.0).sqrt()).abs() < 1e-14);
        assert!((val("2 μ^3 C^(3/2)/π") - val("2*mu^3*C^(3/2)/pi")).abs() < 1e-14);
        assert!((val("-2^2") + 4.0).abs() < 1e-15);
    }

    #[test]
    fn display_round_trip() {
        for s in ["8/(3*pi)", "27/8*sqrt(3/pi)", "6*lambda*mu^3*C^(5/2)/(5*pi)", "4/(3*sqrt(pi))", "(2*sqrt(2))"] {
            let e: ConstExpr = s.parse().unwrap();
            let back: ConstExpr = e.to_string().parse().unwrap();
            assert_eq!(e.eval(128).unwrap(), back.eval(128).unwrap(), "{}", s);
        }
    }

    #[test]
    fn errors() {
        assert!("sqrt(".parse::<ConstExpr>().is_err());
        assert!("Z".parse::<ConstExpr>().is_err());
        assert!("2^pi".parse::<ConstExpr>().is_err());
        assert_eq!("sqrt(1-2)".parse::<ConstExpr>().unwrap().eval(64), Err(Error::ArgumentOutOfRange));
    }
}
