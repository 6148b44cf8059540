//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Variables are named `x1..xn`. Besides ring arithmetic the module provides
//! the translation `p(x + c) - p(c)` and the homomorphism [`MultiPoly::phi`]
//! into the shuffle algebra on `n` letters.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, ParseError, Result};
use crate::words::{parse_decimal, TensorElem, Word};
use crate::Rational;

pub type Exponents = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    num_vars: usize,
    terms: BTreeMap<Exponents, Rational>,
}

impl MultiPoly {
    pub fn zero(num_vars: usize) -> Self {
        assert!(num_vars > 0, "a polynomial needs at least one variable");
        MultiPoly {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, c: Rational) -> Self {
        let mut p = MultiPoly::zero(num_vars);
        p.add_term(vec![0; num_vars], c);
        p
    }

    /// The coordinate function `x_i`, 1-based.
    pub fn var(num_vars: usize, i: usize) -> Result<Self> {
        if i == 0 || i > num_vars {
            return Err(Error::usage(format!(
                "variable x{i} outside x1..x{num_vars}"
            )));
        }
        let mut exps = vec![0; num_vars];
        exps[i - 1] = 1;
        let mut p = MultiPoly::zero(num_vars);
        p.add_term(exps, Rational::one());
        Ok(p)
    }

    pub fn from_terms<I>(num_vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponents, Rational)>,
    {
        let mut p = MultiPoly::zero(num_vars);
        for (exps, c) in terms {
            if exps.len() != num_vars {
                return Err(Error::usage(format!(
                    "exponent vector of length {} for {num_vars} variables",
                    exps.len()
                )));
            }
            p.add_term(exps, c);
        }
        Ok(p)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&vec![0; self.num_vars])
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, exps: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(slot) => {
                *slot += c;
                if slot.is_zero() {
                    self.terms.remove(&exps);
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        let mut out = MultiPoly::zero(self.num_vars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn pow(&self, n: u32) -> MultiPoly {
        let mut acc = MultiPoly::constant(self.num_vars, Rational::one());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Same polynomial in more variables.
    pub fn widen(&self, num_vars: usize) -> Result<MultiPoly> {
        if num_vars < self.num_vars {
            return Err(Error::usage(format!(
                "cannot narrow {} variables to {num_vars}",
                self.num_vars
            )));
        }
        let mut out = MultiPoly::zero(num_vars);
        for (e, c) in &self.terms {
            let mut wide = e.clone();
            wide.resize(num_vars, 0);
            out.add_term(wide, c.clone());
        }
        Ok(out)
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x.len())?;
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono: f64 = e.iter().zip(x).map(|(&k, &xi)| xi.powi(k as i32)).product();
                c.to_f64().unwrap_or(f64::NAN) * mono
            })
            .sum())
    }

    pub fn eval_exact(&self, x: &[Rational]) -> Result<Rational> {
        self.check_dim(x.len())?;
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (&k, xi) in e.iter().zip(x) {
                term *= num_traits::pow(xi.clone(), k as usize);
            }
            acc += term;
        }
        Ok(acc)
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n != self.num_vars {
            return Err(Error::usage(format!(
                "point of dimension {n} for a polynomial in {} variables",
                self.num_vars
            )));
        }
        Ok(())
    }

    /// Formal partial derivative with respect to `x_j`, 1-based.
    pub fn partial(&self, j: usize) -> Result<MultiPoly> {
        if j == 0 || j > self.num_vars {
            return Err(Error::usage(format!(
                "variable index {j} outside 1..={}",
                self.num_vars
            )));
        }
        let mut out = MultiPoly::zero(self.num_vars);
        for (e, c) in &self.terms {
            let k = e[j - 1];
            if k == 0 {
                continue;
            }
            let mut de = e.clone();
            de[j - 1] -= 1;
            out.add_term(de, c * Rational::from_integer(BigInt::from(k)));
        }
        Ok(out)
    }

    /// `q(x) = p(x + c) - p(c)`, so that `q(0) = 0` exactly.
    pub fn translate(&self, c: &[Rational]) -> Result<MultiPoly> {
        self.check_dim(c.len())?;
        let shifted: Vec<MultiPoly> = (1..=self.num_vars)
            .map(|i| {
                let xi = MultiPoly::var(self.num_vars, i).expect("in range");
                &xi + &MultiPoly::constant(self.num_vars, c[i - 1].clone())
            })
            .collect();
        let mut out = MultiPoly::zero(self.num_vars);
        for (e, coef) in &self.terms {
            let mut term = MultiPoly::constant(self.num_vars, coef.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = &term * &shifted[i].pow(k);
                }
            }
            out = &out + &term;
        }
        out.terms.remove(&vec![0; self.num_vars]);
        Ok(out)
    }

    /// [`MultiPoly::translate`] by a floating shift, converting every entry
    /// exactly to a rational first.
    pub fn translate_f64(&self, c: &[f64]) -> Result<MultiPoly> {
        let exact = c
            .iter()
            .map(|&v| exact_rational(v))
            .collect::<Result<Vec<_>>>()?;
        self.translate(&exact)
    }

    /// Image under the ring homomorphism into `(T(R^n), ⧢, ∅)` sending
    /// `x_i` to the one-letter word `[i]`.
    ///
    /// A monomial `x^α` maps to the sum of all distinct arrangements of the
    /// letter multiset `{1^α_1, ..., n^α_n}`, each with coefficient `Π α_i!`.
    pub fn phi(&self) -> TensorElem {
        let mut out = TensorElem::zero(self.num_vars);
        for (e, c) in &self.terms {
            let weight: BigInt = e
                .iter()
                .map(|&k| (1..=k as u64).map(BigInt::from).product::<BigInt>())
                .product();
            let coef = c * Rational::from_integer(weight);
            let mut counts: Vec<u32> = e.clone();
            let total: u32 = counts.iter().sum();
            let mut buf = Vec::with_capacity(total as usize);
            arrangements(&mut counts, total as usize, &mut buf, &mut |letters| {
                out.add_term(
                    Word::new(self.num_vars, letters.to_vec()).expect("letters in range"),
                    coef.clone(),
                );
            });
        }
        out
    }

    /// Parses the expression grammar over `x1..x{num_vars}`: `+ - * ^`,
    /// parentheses, non-negative integer exponents, and integer, decimal or
    /// `p/q` literals.
    pub fn parse(text: &str, num_vars: usize) -> Result<MultiPoly> {
        if num_vars == 0 {
            return Err(Error::usage("a polynomial needs at least one variable"));
        }
        let mut parser = Parser {
            chars: text.chars().collect(),
            pos: 0,
            num_vars,
        };
        parser.skip_ws();
        if parser.at_end() {
            return Err(ParseError::at_column(1, "empty expression").into());
        }
        let p = parser.expr()?;
        parser.skip_ws();
        if !parser.at_end() {
            return Err(parser.error("unexpected input").into());
        }
        Ok(p)
    }
}

/// Exact rational value of a finite float.
pub fn exact_rational(v: f64) -> Result<Rational> {
    Rational::from_float(v).ok_or_else(|| Error::domain(format!("non-finite value {v}")))
}

fn arrangements(
    counts: &mut [u32],
    remaining: usize,
    buf: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize]),
) {
    if remaining == 0 {
        emit(buf);
        return;
    }
    for i in 0..counts.len() {
        if counts[i] == 0 {
            continue;
        }
        counts[i] -= 1;
        buf.push(i + 1);
        arrangements(counts, remaining - 1, buf, emit);
        buf.pop();
        counts[i] += 1;
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;

    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.num_vars, rhs.num_vars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;

    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self + &-rhs
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;

    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;

    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.num_vars, rhs.num_vars, "variable count mismatch");
        let mut out = MultiPoly::zero(self.num_vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    /// Descending total degree, then descending exponent vector.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut order: Vec<(&Exponents, &Rational)> = self.terms.iter().collect();
        order.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        for (i, (e, c)) in order.into_iter().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(j, &k)| {
                    if k == 1 {
                        format!("x{}", j + 1)
                    } else {
                        format!("x{}^{k}", j + 1)
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    num_vars: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn error(&self, msg: &str) -> ParseError {
        let found = match self.peek() {
            Some(c) => format!("{msg} (found '{c}')"),
            None => format!("{msg} (found end of input)"),
        };
        ParseError::at_column(self.pos + 1, found)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = self.term()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some('-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.unary()?;
        loop {
            self.skip_ws();
            if self.peek() == Some('*') {
                self.pos += 1;
                acc = &acc * &self.unary()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<MultiPoly> {
        self.skip_ws();
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.primary()?;
        self.skip_ws();
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let col = self.pos + 1;
        if self.peek() == Some('-') {
            return Err(ParseError::at_column(col, "negative exponent").into());
        }
        let digits = self.digits();
        if digits.is_empty() {
            return Err(self.error("expected an integer exponent").into());
        }
        let k: u32 = digits
            .parse()
            .map_err(|_| ParseError::at_column(col, "exponent too large"))?;
        Ok(base.pow(k))
    }

    fn primary(&mut self) -> Result<MultiPoly> {
        self.skip_ws();
        let col = self.pos + 1;
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'").into());
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let value = self.number()?;
                Ok(MultiPoly::constant(self.num_vars, value))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_alphanumeric() || c == '_') {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                let index = name
                    .strip_prefix('x')
                    .filter(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
                    .and_then(|rest| rest.parse::<usize>().ok())
                    .filter(|&i| i >= 1 && i <= self.num_vars);
                match index {
                    Some(i) => Ok(MultiPoly::var(self.num_vars, i)?),
                    None => Err(ParseError::at_column(
                        col,
                        format!(
                            "unknown variable '{name}' (expected x1..x{})",
                            self.num_vars
                        ),
                    )
                    .into()),
                }
            }
            _ => Err(self.error("expected a number, variable or '('").into()),
        }
    }

    fn number(&mut self) -> Result<Rational> {
        let col = self.pos + 1;
        let int = self.digits();
        if self.peek() == Some('.') {
            self.pos += 1;
            let frac = self.digits();
            return parse_decimal(&int, &frac)
                .ok_or_else(|| ParseError::at_column(col, "malformed number").into());
        }
        let mut value = parse_decimal(&int, "").expect("at least one digit");
        if self.peek() == Some('/') {
            self.pos += 1;
            let den = self.digits();
            if den.is_empty() {
                return Err(self.error("expected a denominator").into());
            }
            let den: BigInt = den.parse().expect("digits");
            if den.is_zero() {
                return Err(ParseError::at_column(col, "zero denominator").into());
            }
            value /= Rational::from_integer(den);
        }
        Ok(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::shuffle;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn int(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn paraboloid() -> MultiPoly {
        MultiPoly::parse("2*x1^2 - x2^2 - x3", 3).unwrap()
    }

    #[test]
    fn eval_examples() {
        let p = MultiPoly::parse("x1^2", 1).unwrap();
        assert_eq!(p.eval(&[3.0]).unwrap(), 9.0);
        assert_eq!(paraboloid().eval(&[1.0, 1.0, 1.0]).unwrap(), 0.0);
        assert_eq!(MultiPoly::zero(2).eval(&[4.0, 5.0]).unwrap(), 0.0);
        assert!(matches!(p.eval(&[1.0, 2.0]), Err(Error::Usage(_))));
    }

    #[test]
    fn partial_examples() {
        let p = MultiPoly::parse("x1^2", 1).unwrap();
        assert_eq!(p.partial(1).unwrap(), MultiPoly::parse("2*x1", 1).unwrap());
        assert_eq!(
            paraboloid().partial(2).unwrap(),
            MultiPoly::parse("-2*x2", 3).unwrap()
        );
        let c = MultiPoly::constant(3, int(7));
        assert!(c.partial(3).unwrap().is_zero());
        assert!(c.partial(4).is_err());
        assert!(c.partial(0).is_err());
    }

    #[test]
    fn partial_matches_finite_differences() {
        let p = paraboloid();
        let x = [0.3, -0.7, 1.1];
        for j in 1..=3 {
            let h = 1e-5;
            let mut xp = x;
            let mut xm = x;
            xp[j - 1] += h;
            xm[j - 1] -= h;
            let fd = (p.eval(&xp).unwrap() - p.eval(&xm).unwrap()) / (2.0 * h);
            let exact = p.partial(j).unwrap().eval(&x).unwrap();
            assert!((fd - exact).abs() < 1e-8, "j={j}: {fd} vs {exact}");
        }
    }

    #[test]
    fn translate_paraboloid_symbolic() {
        let (a, b, c) = (q(3, 7), q(-2, 5), q(11, 3));
        let got = paraboloid().translate(&[a.clone(), b.clone(), c]).unwrap();
        let want = MultiPoly::from_terms(
            3,
            [
                (vec![2, 0, 0], int(2)),
                (vec![1, 0, 0], int(4) * a),
                (vec![0, 2, 0], int(-1)),
                (vec![0, 1, 0], int(-2) * b),
                (vec![0, 0, 1], int(-1)),
            ],
        )
        .unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn translate_zero_shift() {
        let p = MultiPoly::parse("x1^2 - 2*x1 + x2^2 + 5", 2).unwrap();
        let got = p.translate(&[int(0), int(0)]).unwrap();
        assert_eq!(got, &p - &MultiPoly::constant(2, int(5)));

        let circle = MultiPoly::parse("x1^2 - 2*x1 + x2^2", 2).unwrap();
        assert_eq!(circle.translate(&[int(0), int(0)]).unwrap(), circle);
    }

    #[test]
    fn translate_f64_is_exact_at_origin() {
        let p = paraboloid();
        let shift = [0.1, std::f64::consts::PI, -1.0 / 3.0];
        let t = p.translate_f64(&shift).unwrap();
        assert!(t.constant_term().is_zero());
        assert!(p.translate_f64(&[f64::NAN, 0.0, 0.0]).is_err());
    }

    #[test]
    fn phi_examples() {
        let x1 = MultiPoly::var(2, 1).unwrap();
        assert_eq!(x1.phi(), TensorElem::parse("[1]", 2).unwrap());
        assert_eq!(x1.pow(2).phi(), TensorElem::parse("2*[1,1]", 2).unwrap());
        let p = MultiPoly::parse("2*x1 + 3", 2).unwrap();
        assert_eq!(p.phi(), TensorElem::parse("3*[] + 2*[1]", 2).unwrap());
        let mixed = MultiPoly::parse("x1^2*x2", 2).unwrap();
        assert_eq!(
            mixed.phi(),
            TensorElem::parse("2*[1,1,2] + 2*[1,2,1] + 2*[2,1,1]", 2).unwrap()
        );
    }

    #[test]
    fn parse_examples() {
        let p = paraboloid();
        assert_eq!(p.to_string(), "2*x1^2 - x2^2 - x3");
        assert!(MultiPoly::parse("0", 2).unwrap().is_zero());
        let merged = MultiPoly::parse("x1*x2 + x2*x1", 2).unwrap();
        assert_eq!(merged.to_string(), "2*x1*x2");
        let frac = MultiPoly::parse("1/2*x1 - 0.25 + (x2 - 1)^2", 2).unwrap();
        assert_eq!(frac.to_string(), "x2^2 + 1/2*x1 - 2*x2 + 3/4");
        assert_eq!(MultiPoly::parse("-x1^2", 1).unwrap().to_string(), "-x1^2");
    }

    #[test]
    fn parse_errors() {
        let err = |s: &str| match MultiPoly::parse(s, 3) {
            Err(Error::Parse(e)) => e,
            other => panic!("expected parse error for {s:?}, got {other:?}"),
        };
        let e = err("x1 + y");
        assert_eq!(e.column, Some(6));
        assert!(e.message.contains("unknown variable"));
        assert!(err("x4").message.contains("unknown variable"));
        assert!(err("x0").message.contains("unknown variable"));
        assert!(err("x1^-2").message.contains("negative exponent"));
        assert_eq!(err("x1 + * x2").column, Some(6));
        assert!(err("(x1 + x2").message.contains("')'"));
        assert!(err("").message.contains("empty"));
        assert!(err("2 x1").message.contains("unexpected"));
    }

    fn arb_poly(num_vars: usize, max_deg: u32) -> impl Strategy<Value = MultiPoly> {
        prop::collection::vec(
            (
                prop::collection::vec(0..=max_deg, num_vars),
                -5i64..=5,
                1i64..=3,
            ),
            0..5,
        )
        .prop_map(move |terms| {
            let filtered = terms
                .into_iter()
                .filter_map(|(e, n, d)| (e.iter().sum::<u32>() <= max_deg).then(|| (e, q(n, d))));
            MultiPoly::from_terms(num_vars, filtered).unwrap()
        })
    }

    /// Sum of absolute monomial values, the natural scale of rounding error.
    fn magnitude(p: &MultiPoly, x: &[f64]) -> f64 {
        let abs = MultiPoly::from_terms(p.num_vars(), p.terms().map(|(e, c)| (e.clone(), c.abs())))
            .unwrap();
        let xa: Vec<f64> = x.iter().map(|v| v.abs()).collect();
        abs.eval(&xa).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn phi_is_ring_homomorphism(
            (p, r) in (1usize..=3).prop_flat_map(|n| (arb_poly(n, 3), arb_poly(n, 3)))
        ) {
            let lhs = (&p * &r).phi();
            let rhs = shuffle(&p.phi(), &r.phi()).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!((&p + &r).phi(), &p.phi() + &r.phi());
        }

        #[test]
        fn translate_matches_shifted_eval(
            p in arb_poly(3, 4),
            c in prop::collection::vec(-2.0f64..2.0, 3),
            x in prop::collection::vec(-2.0f64..2.0, 3),
        ) {
            let t = p.translate_f64(&c).unwrap();
            let xc: Vec<f64> = x.iter().zip(&c).map(|(a, b)| a + b).collect();
            let want = p.eval(&xc).unwrap() - p.eval(&c).unwrap();
            let got = t.eval(&x).unwrap();
            let scale = 1.0 + magnitude(&p, &xc) + magnitude(&p, &c);
            prop_assert!((got - want).abs() <= 1e-12 * scale, "{} vs {}", got, want);
        }

        #[test]
        fn partial_commutes_with_translate(
            p in arb_poly(2, 4),
            c in prop::collection::vec(-2i64..=2, 2),
            x in prop::collection::vec(-2.0f64..2.0, 2),
            j in 1usize..=2,
        ) {
            let c: Vec<Rational> = c.into_iter().map(int).collect();
            let cf: Vec<f64> = c.iter().map(|v| v.to_f64().unwrap()).collect();
            let lhs = p.translate(&c).unwrap().partial(j).unwrap().eval(&x).unwrap();
            let xc: Vec<f64> = x.iter().zip(&cf).map(|(a, b)| a + b).collect();
            let dp = p.partial(j).unwrap();
            let rhs = dp.eval(&xc).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + magnitude(&dp, &xc)));
        }

        #[test]
        fn display_round_trips(p in arb_poly(3, 3)) {
            let text = p.to_string();
            prop_assert_eq!(MultiPoly::parse(&text, 3).unwrap(), p);
        }
    }
}
