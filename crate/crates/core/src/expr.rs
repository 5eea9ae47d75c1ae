//! Expression trees for production functions.
//!
//! An [`Expr`] is a small arithmetic AST over input variables `x_0..x_{n-1}`.
//! The same tree is evaluated in plain `f64` and in second-order forward mode
//! (see [`crate::diff`]) through one generic interpreter, so the value carried
//! by a jet is computed along exactly the same arithmetic path as
//! [`crate::FunctionSpec::evaluate`].

use std::ops;

/// An arithmetic expression over indexed input variables.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    /// Input variable by zero-based index.
    Var(usize),
    Neg(Box<Expr>),
    /// Left fold of `+` over the children; the empty sum is `0`.
    Sum(Vec<Expr>),
    /// Left fold of `*` over the children; the empty product is `1`.
    Product(Vec<Expr>),
    Quotient(Box<Expr>, Box<Expr>),
    /// `base^exponent`. Integral exponents use repeated multiplication and accept
    /// any nonzero base; other exponents need a strictly positive base.
    Pow(Box<Expr>, f64),
    Exp(Box<Expr>),
    Ln(Box<Expr>),
}

impl Expr {
    pub fn constant(c: f64) -> Expr {
        Expr::Const(c)
    }

    pub fn var(index: usize) -> Expr {
        Expr::Var(index)
    }

    pub fn sum(terms: Vec<Expr>) -> Expr {
        Expr::Sum(terms)
    }

    pub fn product(factors: Vec<Expr>) -> Expr {
        Expr::Product(factors)
    }

    pub fn quotient(num: Expr, den: Expr) -> Expr {
        Expr::Quotient(Box::new(num), Box::new(den))
    }

    pub fn powf(self, exponent: f64) -> Expr {
        Expr::Pow(Box::new(self), exponent)
    }

    pub fn exp(self) -> Expr {
        Expr::Exp(Box::new(self))
    }

    pub fn ln(self) -> Expr {
        Expr::Ln(Box::new(self))
    }

    /// Largest variable index referenced, or `None` for a constant expression.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Const(_) => None,
            Expr::Var(i) => Some(*i),
            Expr::Neg(e) | Expr::Pow(e, _) | Expr::Exp(e) | Expr::Ln(e) => e.max_var(),
            Expr::Sum(es) | Expr::Product(es) => es.iter().filter_map(Expr::max_var).max(),
            Expr::Quotient(a, b) => a.max_var().max(b.max_var()),
        }
    }

    /// Replaces every variable `x_i` with `f(i)`.
    pub fn substitute(&self, f: &impl Fn(usize) -> Expr) -> Expr {
        match self {
            Expr::Const(c) => Expr::Const(*c),
            Expr::Var(i) => f(*i),
            Expr::Neg(e) => Expr::Neg(Box::new(e.substitute(f))),
            Expr::Sum(es) => Expr::Sum(es.iter().map(|e| e.substitute(f)).collect()),
            Expr::Product(es) => Expr::Product(es.iter().map(|e| e.substitute(f)).collect()),
            Expr::Quotient(a, b) => {
                Expr::Quotient(Box::new(a.substitute(f)), Box::new(b.substitute(f)))
            }
            Expr::Pow(e, c) => Expr::Pow(Box::new(e.substitute(f)), *c),
            Expr::Exp(e) => Expr::Exp(Box::new(e.substitute(f))),
            Expr::Ln(e) => Expr::Ln(Box::new(e.substitute(f))),
        }
    }

    /// Evaluates at `x` without the positivity requirement on the result.
    ///
    /// Returns the reason string on a domain failure; callers attach the point.
    pub fn eval(&self, x: &[f64]) -> Result<f64, String> {
        let ctx = PlainCtx(x);
        interpret(self, &ctx)
    }
}

impl ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::Sum(vec![self, rhs])
    }
}

impl ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::Sum(vec![self, Expr::Neg(Box::new(rhs))])
    }
}

impl ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::Product(vec![self, rhs])
    }
}

impl ops::Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        Expr::quotient(self, rhs)
    }
}

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

/// Number-like carrier for the interpreter.
///
/// `value()` of every result must be computed exactly as the `f64`
/// implementation would compute it.
pub(crate) trait Scalar: Sized {
    fn value(&self) -> f64;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn div(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Applies a univariate function given its value and first two derivatives
    /// at `self.value()`.
    fn chain(&self, f0: f64, f1: f64, f2: f64) -> Self;
}

pub(crate) trait Context {
    type S: Scalar;
    fn var(&self, index: usize) -> Result<Self::S, String>;
    fn constant(&self, c: f64) -> Self::S;
}

impl Scalar for f64 {
    fn value(&self) -> f64 {
        *self
    }
    fn add(&self, other: &f64) -> f64 {
        self + other
    }
    fn mul(&self, other: &f64) -> f64 {
        self * other
    }
    fn div(&self, other: &f64) -> f64 {
        self / other
    }
    fn neg(&self) -> f64 {
        -self
    }
    fn chain(&self, f0: f64, _f1: f64, _f2: f64) -> f64 {
        f0
    }
}

struct PlainCtx<'a>(&'a [f64]);

impl Context for PlainCtx<'_> {
    type S = f64;
    fn var(&self, index: usize) -> Result<f64, String> {
        self.0
            .get(index)
            .copied()
            .ok_or_else(|| format!("variable x{index} out of range for {} inputs", self.0.len()))
    }
    fn constant(&self, c: f64) -> f64 {
        c
    }
}

fn integral_exponent(c: f64) -> Option<i32> {
    if c.fract() == 0.0 && c.abs() <= i32::MAX as f64 {
        Some(c as i32)
    } else {
        None
    }
}

pub(crate) fn interpret<C: Context>(expr: &Expr, ctx: &C) -> Result<C::S, String> {
    match expr {
        Expr::Const(c) => {
            if c.is_finite() {
                Ok(ctx.constant(*c))
            } else {
                Err(format!("non-finite constant {c}"))
            }
        }
        Expr::Var(i) => ctx.var(*i),
        Expr::Neg(e) => Ok(interpret(e, ctx)?.neg()),
        Expr::Sum(es) => {
            let mut it = es.iter();
            let mut acc = match it.next() {
                Some(e) => interpret(e, ctx)?,
                None => return Ok(ctx.constant(0.0)),
            };
            for e in it {
                acc = acc.add(&interpret(e, ctx)?);
            }
            Ok(acc)
        }
        Expr::Product(es) => {
            let mut it = es.iter();
            let mut acc = match it.next() {
                Some(e) => interpret(e, ctx)?,
                None => return Ok(ctx.constant(1.0)),
            };
            for e in it {
                acc = acc.mul(&interpret(e, ctx)?);
            }
            Ok(acc)
        }
        Expr::Quotient(a, b) => {
            let num = interpret(a, ctx)?;
            let den = interpret(b, ctx)?;
            if den.value() == 0.0 {
                return Err("division by zero".into());
            }
            Ok(num.div(&den))
        }
        Expr::Pow(base, c) => {
            let b = interpret(base, ctx)?;
            let v = b.value();
            if !c.is_finite() {
                return Err(format!("non-finite exponent {c}"));
            }
            match integral_exponent(*c) {
                Some(0) => Ok(b.chain(1.0, 0.0, 0.0)),
                Some(1) => Ok(b.chain(v, 1.0, 0.0)),
                Some(k) => {
                    if v == 0.0 && k < 0 {
                        return Err(format!("zero base raised to integer power {k}"));
                    }
                    let kf = k as f64;
                    Ok(b.chain(v.powi(k), kf * v.powi(k - 1), kf * (kf - 1.0) * v.powi(k - 2)))
                }
                None => {
                    if v <= 0.0 {
                        return Err(format!("non-positive base {v} raised to real power {c}"));
                    }
                    Ok(b.chain(v.powf(*c), c * v.powf(c - 1.0), c * (c - 1.0) * v.powf(c - 2.0)))
                }
            }
        }
        Expr::Exp(e) => {
            let a = interpret(e, ctx)?;
            let ev = a.value().exp();
            Ok(a.chain(ev, ev, ev))
        }
        Expr::Ln(e) => {
            let a = interpret(e, ctx)?;
            let v = a.value();
            if v <= 0.0 {
                return Err(format!("logarithm of non-positive value {v}"));
            }
            Ok(a.chain(v.ln(), 1.0 / v, -1.0 / (v * v)))
        }
    }
}
