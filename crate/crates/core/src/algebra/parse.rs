//! Expression grammar for curve and operator files.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := base ('^' ['-'] integer)?
//! base   := integer | name | 'log' '(' expr ')' | 'sqrt' '(' integer ')' | '(' expr ')'
//! ```
//!
//! The leading `-` and `sqrt(integer)` exist so that every printed value
//! parses back to itself.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::field::FieldElement;
use super::logfn::LogAugmentedFunction;
use super::ratfun::RationalFunction;
use crate::error::ParseError;

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Int(BigInt),
    Name(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Log(Box<Expr>),
    Sqrt(BigInt),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    pub node: Node,
    pub offset: usize,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Sym(char),
    End,
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

fn syntax(offset: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { offset, message: message.into() }
}

fn semantic(offset: usize, message: impl Into<String>) -> ParseError {
    ParseError::Semantic { offset, message: message.into() }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    // Offsets are byte offsets into `text`.
    let byte_at: Vec<usize> = text.char_indices().map(|(b, _)| b).collect();
    while i < bytes.len() {
        let c = bytes[i];
        let off = byte_at[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = bytes[start..i].iter().collect();
            out.push((Tok::Int(s.parse().unwrap()), off));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_alphanumeric() || bytes[i] == '_') {
                i += 1;
            }
            out.push((Tok::Name(bytes[start..i].iter().collect()), off));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Sym(c), off));
            i += 1;
        } else {
            return Err(syntax(off, format!("unexpected character `{c}`")));
        }
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

impl Parser {
    fn peek(&self) -> &(Tok, usize) {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect_sym(&mut self, c: char) -> Result<(), ParseError> {
        match self.next() {
            (Tok::Sym(d), _) if d == c => Ok(()),
            (_, off) => Err(syntax(off, format!("expected `{c}`"))),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = if let (Tok::Sym('-'), off) = self.peek().clone() {
            self.next();
            let t = self.term()?;
            Expr { node: Node::Neg(Box::new(t)), offset: off }
        } else {
            self.term()?
        };
        loop {
            match self.peek().clone() {
                (Tok::Sym('+'), off) => {
                    self.next();
                    let r = self.term()?;
                    lhs = Expr { node: Node::Add(Box::new(lhs), Box::new(r)), offset: off };
                }
                (Tok::Sym('-'), off) => {
                    self.next();
                    let r = self.term()?;
                    lhs = Expr { node: Node::Sub(Box::new(lhs), Box::new(r)), offset: off };
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek().clone() {
                (Tok::Sym('*'), off) => {
                    self.next();
                    let r = self.factor()?;
                    lhs = Expr { node: Node::Mul(Box::new(lhs), Box::new(r)), offset: off };
                }
                (Tok::Sym('/'), off) => {
                    self.next();
                    let r = self.factor()?;
                    lhs = Expr { node: Node::Div(Box::new(lhs), Box::new(r)), offset: off };
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.base()?;
        if let (Tok::Sym('^'), off) = self.peek().clone() {
            self.next();
            let neg = matches!(self.peek().0, Tok::Sym('-'));
            if neg {
                self.next();
            }
            match self.next() {
                (Tok::Int(n), noff) => {
                    let e = n.to_i64().ok_or_else(|| syntax(noff, "exponent too large"))?;
                    let e = if neg { -e } else { e };
                    return Ok(Expr { node: Node::Pow(Box::new(base), e), offset: off });
                }
                (_, noff) => return Err(syntax(noff, "expected an integer exponent")),
            }
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        match self.next() {
            (Tok::Int(n), off) => Ok(Expr { node: Node::Int(n), offset: off }),
            (Tok::Name(name), off) => {
                if name == "log" || name == "sqrt" {
                    if let (Tok::Sym('('), _) = self.peek() {
                        self.next();
                        if name == "log" {
                            let inner = self.expr()?;
                            self.expect_sym(')')?;
                            return Ok(Expr { node: Node::Log(Box::new(inner)), offset: off });
                        }
                        let neg = matches!(self.peek().0, Tok::Sym('-'));
                        if neg {
                            self.next();
                        }
                        let n = match self.next() {
                            (Tok::Int(n), _) => n,
                            (_, o) => return Err(syntax(o, "sqrt takes an integer")),
                        };
                        self.expect_sym(')')?;
                        let n = if neg { -n } else { n };
                        return Ok(Expr { node: Node::Sqrt(n), offset: off });
                    }
                    return Err(syntax(off, format!("`{name}` must be followed by `(`")));
                }
                Ok(Expr { node: Node::Name(name), offset: off })
            }
            (Tok::Sym('('), _) => {
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            (Tok::End, off) => Err(syntax(off, "unexpected end of input")),
            (t, off) => Err(syntax(off, format!("unexpected {}", describe(&t)))),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(n) => format!("number `{n}`"),
        Tok::Name(s) => format!("name `{s}`"),
        Tok::Sym(c) => format!("`{c}`"),
        Tok::End => "end of input".into(),
    }
}

/// Parse text into an AST.
pub fn parse_ast(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { toks: tokenize(text)?, pos: 0 };
    let e = p.expr()?;
    match p.peek().clone() {
        (Tok::End, _) => Ok(e),
        (t, off) => Err(syntax(off, format!("unexpected {}", describe(&t)))),
    }
}

/// Parse a one-parameter expression.
pub fn parse_expr(text: &str, parameter: &str) -> Result<LogAugmentedFunction, ParseError> {
    parse_expr_with(text, parameter, &HashMap::new())
}

/// Parse with named constants substituted.
pub fn parse_expr_with(
    text: &str,
    parameter: &str,
    constants: &HashMap<String, FieldElement>,
) -> Result<LogAugmentedFunction, ParseError> {
    let ast = parse_ast(text)?;
    eval_logaug(&ast, parameter, constants)
}

/// Parse a constant (no parameter allowed).
pub fn parse_constant(text: &str, constants: &HashMap<String, FieldElement>) -> Result<FieldElement, ParseError> {
    let ast = parse_ast(text)?;
    let f = eval_logaug(&ast, "\u{0}", constants)?;
    f.as_rational().and_then(|r| r.as_constant()).ok_or_else(|| semantic(0, "expected a constant"))
}

fn eval_logaug(
    e: &Expr,
    param: &str,
    consts: &HashMap<String, FieldElement>,
) -> Result<LogAugmentedFunction, ParseError> {
    let rat = |r: RationalFunction| LogAugmentedFunction::from_rational(r);
    Ok(match &e.node {
        Node::Int(n) => rat(RationalFunction::constant(FieldElement::from_bigint(n.clone()))),
        Node::Sqrt(n) => {
            rat(RationalFunction::constant(FieldElement::sqrt_rational(&BigRational::from_integer(n.clone()))))
        }
        Node::Name(s) if s == param => rat(RationalFunction::z()),
        Node::Name(s) => match consts.get(s) {
            Some(c) => rat(RationalFunction::constant(c.clone())),
            None => return Err(semantic(e.offset, format!("unknown name `{s}`"))),
        },
        Node::Neg(a) => eval_logaug(a, param, consts)?.neg(),
        Node::Add(a, b) => eval_logaug(a, param, consts)?.add(&eval_logaug(b, param, consts)?),
        Node::Sub(a, b) => eval_logaug(a, param, consts)?.sub(&eval_logaug(b, param, consts)?),
        Node::Mul(a, b) => {
            let x = eval_logaug(a, param, consts)?;
            let y = eval_logaug(b, param, consts)?;
            x.mul(&y).map_err(|err| semantic(e.offset, err.to_string()))?
        }
        Node::Div(a, b) => {
            let x = eval_logaug(a, param, consts)?;
            let y = eval_logaug(b, param, consts)?;
            let r = y.as_rational().ok_or_else(|| semantic(e.offset, "division by a logarithmic expression"))?;
            if r.is_zero() {
                return Err(semantic(e.offset, "division by the zero polynomial"));
            }
            x.mul_rational(&r.inv().unwrap())
        }
        Node::Pow(a, k) => {
            let x = eval_logaug(a, param, consts)?;
            let r = x.as_rational().ok_or_else(|| semantic(e.offset, "power of a logarithmic expression"))?;
            if r.is_zero() && *k < 0 {
                return Err(semantic(e.offset, "division by the zero polynomial"));
            }
            rat(r.pow(*k).unwrap())
        }
        Node::Log(a) => {
            let x = eval_logaug(a, param, consts)?;
            let r = x.as_rational().ok_or_else(|| semantic(e.offset, "log of a logarithmic expression"))?;
            if r.is_constant() {
                return Err(semantic(e.offset, "log of a constant"));
            }
            LogAugmentedFunction::log_term(RationalFunction::one(), r.clone()).unwrap()
        }
    })
}

/// Sparse polynomial in several named variables; keys are exponent vectors.
pub type MultiPoly = BTreeMap<Vec<u32>, FieldElement>;

/// Evaluate an AST into a polynomial in `vars` (division by constants only).
pub fn eval_multipoly(
    e: &Expr,
    vars: &[&str],
    consts: &HashMap<String, FieldElement>,
) -> Result<MultiPoly, ParseError> {
    let nv = vars.len();
    let constant = |c: FieldElement| -> MultiPoly {
        let mut m = MultiPoly::new();
        if !c.is_zero() {
            m.insert(vec![0; nv], c);
        }
        m
    };
    let add = |a: MultiPoly, b: &MultiPoly, sign: i64| -> MultiPoly {
        let mut out = a;
        for (k, v) in b {
            let v = v * &FieldElement::from_int(sign);
            let entry = out.entry(k.clone()).or_insert_with(FieldElement::zero);
            *entry += &v;
        }
        out.retain(|_, v| !v.is_zero());
        out
    };
    let mul = |a: &MultiPoly, b: &MultiPoly| -> MultiPoly {
        let mut out = MultiPoly::new();
        for (ka, va) in a {
            for (kb, vb) in b {
                let k: Vec<u32> = ka.iter().zip(kb).map(|(x, y)| x + y).collect();
                let entry = out.entry(k).or_insert_with(FieldElement::zero);
                *entry += &(va * vb);
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    };
    Ok(match &e.node {
        Node::Int(n) => constant(FieldElement::from_bigint(n.clone())),
        Node::Sqrt(n) => constant(FieldElement::sqrt_rational(&BigRational::from_integer(n.clone()))),
        Node::Name(s) => {
            if let Some(i) = vars.iter().position(|v| v == s) {
                let mut k = vec![0; nv];
                k[i] = 1;
                let mut m = MultiPoly::new();
                m.insert(k, FieldElement::one());
                m
            } else if let Some(c) = consts.get(s) {
                constant(c.clone())
            } else {
                return Err(semantic(e.offset, format!("unknown name `{s}`")));
            }
        }
        Node::Neg(a) => add(MultiPoly::new(), &eval_multipoly(a, vars, consts)?, -1),
        Node::Add(a, b) => add(eval_multipoly(a, vars, consts)?, &eval_multipoly(b, vars, consts)?, 1),
        Node::Sub(a, b) => add(eval_multipoly(a, vars, consts)?, &eval_multipoly(b, vars, consts)?, -1),
        Node::Mul(a, b) => mul(&eval_multipoly(a, vars, consts)?, &eval_multipoly(b, vars, consts)?),
        Node::Div(a, b) => {
            let den = eval_multipoly(b, vars, consts)?;
            let c = match den.len() {
                0 => return Err(semantic(e.offset, "division by the zero polynomial")),
                1 if den.keys().next().unwrap().iter().all(|&x| x == 0) => den.values().next().unwrap().clone(),
                _ => return Err(semantic(e.offset, "division by a non-constant polynomial")),
            };
            mul(&eval_multipoly(a, vars, consts)?, &constant(c.inv()))
        }
        Node::Pow(a, k) => {
            if *k < 0 {
                return Err(semantic(e.offset, "negative power in a polynomial"));
            }
            let base = eval_multipoly(a, vars, consts)?;
            let mut acc = constant(FieldElement::one());
            for _ in 0..*k {
                acc = mul(&acc, &base);
            }
            acc
        }
        Node::Log(_) => return Err(semantic(e.offset, "log is not allowed in a polynomial")),
    })
}

/// Print a multivariate polynomial in the grammar.
pub fn print_multipoly(p: &MultiPoly, vars: &[&str]) -> String {
    if p.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    // Highest total degree first for readability.
    let mut keys: Vec<&Vec<u32>> = p.keys().collect();
    keys.sort_by(|a, b| {
        let da: u32 = a.iter().sum();
        let db: u32 = b.iter().sum();
        db.cmp(&da).then_with(|| b.cmp(a))
    });
    for k in keys {
        let c = &p[k];
        let neg = c.is_rational() && c.rational_part() < &BigRational::zero();
        let mag = if neg { -c } else { c.clone() };
        let mono: Vec<String> = k
            .iter()
            .zip(vars)
            .filter(|(e, _)| **e > 0)
            .map(|(e, v)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
            .collect();
        let coef = if mag.is_one() && !mono.is_empty() {
            String::new()
        } else if mag.is_rational() {
            mag.to_exact_string()
        } else {
            format!("({})", mag.to_exact_string())
        };
        let mut body = coef;
        for m in mono {
            if !body.is_empty() {
                body.push('*');
            }
            body.push_str(&m);
        }
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::Polynomial;

    #[test]
    fn parses_catalan_x() {
        let f = parse_expr("z + 1/z", "z").unwrap();
        let expect = RationalFunction::new(Polynomial::from_ints(&[1, 0, 1]), Polynomial::from_ints(&[0, 1])).unwrap();
        assert_eq!(f.as_rational(), Some(&expect));
    }

    #[test]
    fn parses_log() {
        let f = parse_expr("log(z)", "z").unwrap();
        assert!(f.rational_part().is_zero());
        assert_eq!(f.log_terms(), &[(RationalFunction::one(), RationalFunction::z())]);
    }

    #[test]
    fn reports_offsets() {
        let err = parse_expr("z + + 1", "z").unwrap_err();
        assert_eq!(err.offset(), 4);
        assert!(matches!(err, ParseError::Syntax { .. }));
        let err = parse_expr("1/(z - z)", "z").unwrap_err();
        assert!(err.to_string().contains("zero polynomial"));
        let err = parse_expr("log(3)", "z").unwrap_err();
        assert!(err.to_string().contains("log of a constant"));
        assert!(parse_expr("w + 1", "z").is_err());
    }

    #[test]
    fn multipoly() {
        let ast = parse_ast("y^2 - x*y + 1").unwrap();
        let p = eval_multipoly(&ast, &["x", "y"], &HashMap::new()).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(print_multipoly(&p, &["x", "y"]), "-x*y + y^2 + 1");
    }
}
