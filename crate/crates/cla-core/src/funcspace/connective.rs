//! The closed expression language of continuous connectives.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::TabulatedConnective;

/// Expression tree over continuous primitives.
///
/// Every primitive is continuous on `[0,1]^k`, so every expression is too.
/// Intermediate values may leave `[0,1]` (for instance the sum inside a
/// Łukasiewicz disjunction); [`Connective::new`] guarantees the final range
/// by clamping at the root when interval analysis cannot rule out an
/// excursion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", content = "args", rename_all = "snake_case")]
pub enum Expr {
    Const(f64),
    Proj(usize),
    Sum(Box<Expr>, Box<Expr>),
    Diff(Box<Expr>, Box<Expr>),
    Prod(Box<Expr>, Box<Expr>),
    Min(Box<Expr>, Box<Expr>),
    Max(Box<Expr>, Box<Expr>),
    Abs(Box<Expr>),
    /// `1 - e`
    Complement(Box<Expr>),
    /// Arithmetic mean of the sub-expressions.
    Avg(Vec<Expr>),
    /// Clamp into `[0,1]`.
    Clamp(Box<Expr>),
    /// A tabulated function applied to sub-expressions.
    Table(Arc<TabulatedConnective>, Vec<Expr>),
}

impl Expr {
    pub fn sum(a: Expr, b: Expr) -> Expr {
        Expr::Sum(Box::new(a), Box::new(b))
    }
    pub fn diff(a: Expr, b: Expr) -> Expr {
        Expr::Diff(Box::new(a), Box::new(b))
    }
    pub fn prod(a: Expr, b: Expr) -> Expr {
        Expr::Prod(Box::new(a), Box::new(b))
    }
    pub fn min(a: Expr, b: Expr) -> Expr {
        Expr::Min(Box::new(a), Box::new(b))
    }
    pub fn max(a: Expr, b: Expr) -> Expr {
        Expr::Max(Box::new(a), Box::new(b))
    }
    pub fn abs(a: Expr) -> Expr {
        Expr::Abs(Box::new(a))
    }
    pub fn complement(a: Expr) -> Expr {
        Expr::Complement(Box::new(a))
    }
    pub fn clamp(a: Expr) -> Expr {
        Expr::Clamp(Box::new(a))
    }

    pub fn eval(&self, args: &[f64]) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Proj(i) => args[*i],
            Expr::Sum(a, b) => a.eval(args) + b.eval(args),
            Expr::Diff(a, b) => a.eval(args) - b.eval(args),
            Expr::Prod(a, b) => a.eval(args) * b.eval(args),
            Expr::Min(a, b) => a.eval(args).min(b.eval(args)),
            Expr::Max(a, b) => a.eval(args).max(b.eval(args)),
            Expr::Abs(a) => a.eval(args).abs(),
            Expr::Complement(a) => 1.0 - a.eval(args),
            Expr::Avg(items) => {
                let mut sum = 0.0;
                for e in items {
                    sum += e.eval(args);
                }
                sum / items.len() as f64
            }
            Expr::Clamp(a) => a.eval(args).clamp(0.0, 1.0),
            Expr::Table(t, items) => {
                let mut buf = [0.0f64; 8];
                for (slot, e) in buf.iter_mut().zip(items) {
                    *slot = e.eval(args);
                }
                t.eval(&buf[..items.len()])
            }
        }
    }

    /// Checks structural validity against a connective arity: projection
    /// indices in range, constants in `[0,1]`, averages nonempty, tabulated
    /// applications saturated.
    pub fn validate(&self, arity: usize) -> Result<()> {
        match self {
            Expr::Const(c) => {
                if !c.is_finite() || !(0.0..=1.0).contains(c) {
                    return Err(Error::Formula(format!(
                        "expression constant {c} outside [0,1]"
                    )));
                }
            }
            Expr::Proj(i) => {
                if *i >= arity {
                    return Err(Error::Formula(format!(
                        "projection index {i} out of range for arity {arity}"
                    )));
                }
            }
            Expr::Sum(a, b)
            | Expr::Diff(a, b)
            | Expr::Prod(a, b)
            | Expr::Min(a, b)
            | Expr::Max(a, b) => {
                a.validate(arity)?;
                b.validate(arity)?;
            }
            Expr::Abs(a) | Expr::Complement(a) | Expr::Clamp(a) => a.validate(arity)?,
            Expr::Avg(items) => {
                if items.is_empty() {
                    return Err(Error::Formula("empty average expression".into()));
                }
                for e in items {
                    e.validate(arity)?;
                }
            }
            Expr::Table(t, items) => {
                if items.len() != t.arity() {
                    return Err(Error::Formula(format!(
                        "tabulated function of arity {} applied to {} expressions",
                        t.arity(),
                        items.len()
                    )));
                }
                if t.arity() > 8 {
                    return Err(Error::Formula(
                        "tabulated arity beyond supported maximum of 8".into(),
                    ));
                }
                for e in items {
                    e.validate(arity)?;
                }
            }
        }
        Ok(())
    }

    /// Conservative range of the expression over `[0,1]^k` inputs
    /// (interval arithmetic).
    pub fn bounds(&self) -> (f64, f64) {
        match self {
            Expr::Const(c) => (*c, *c),
            Expr::Proj(_) => (0.0, 1.0),
            Expr::Sum(a, b) => {
                let (al, ah) = a.bounds();
                let (bl, bh) = b.bounds();
                (al + bl, ah + bh)
            }
            Expr::Diff(a, b) => {
                let (al, ah) = a.bounds();
                let (bl, bh) = b.bounds();
                (al - bh, ah - bl)
            }
            Expr::Prod(a, b) => {
                let (al, ah) = a.bounds();
                let (bl, bh) = b.bounds();
                let cs = [al * bl, al * bh, ah * bl, ah * bh];
                (
                    cs.iter().copied().fold(f64::INFINITY, f64::min),
                    cs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                )
            }
            Expr::Min(a, b) => {
                let (al, ah) = a.bounds();
                let (bl, bh) = b.bounds();
                (al.min(bl), ah.min(bh))
            }
            Expr::Max(a, b) => {
                let (al, ah) = a.bounds();
                let (bl, bh) = b.bounds();
                (al.max(bl), ah.max(bh))
            }
            Expr::Abs(a) => {
                let (al, ah) = a.bounds();
                if al >= 0.0 {
                    (al, ah)
                } else if ah <= 0.0 {
                    (-ah, -al)
                } else {
                    (0.0, ah.max(-al))
                }
            }
            Expr::Complement(a) => {
                let (al, ah) = a.bounds();
                (1.0 - ah, 1.0 - al)
            }
            Expr::Avg(items) => {
                let mut lo = 0.0;
                let mut hi = 0.0;
                for e in items {
                    let (el, eh) = e.bounds();
                    lo += el;
                    hi += eh;
                }
                let k = items.len() as f64;
                (lo / k, hi / k)
            }
            Expr::Clamp(a) => {
                let (al, ah) = a.bounds();
                (al.clamp(0.0, 1.0), ah.clamp(0.0, 1.0))
            }
            Expr::Table(t, _) => t.value_bounds(),
        }
    }

    /// A Lipschitz bound in the sup norm over `[0,1]^k` inputs.
    pub fn lipschitz(&self) -> f64 {
        match self {
            Expr::Const(_) => 0.0,
            Expr::Proj(_) => 1.0,
            Expr::Sum(a, b) | Expr::Diff(a, b) => a.lipschitz() + b.lipschitz(),
            Expr::Prod(a, b) => {
                let (al, ah) = a.bounds();
                let (bl, bh) = b.bounds();
                let a_mag = al.abs().max(ah.abs());
                let b_mag = bl.abs().max(bh.abs());
                a.lipschitz() * b_mag + b.lipschitz() * a_mag
            }
            Expr::Min(a, b) | Expr::Max(a, b) => a.lipschitz().max(b.lipschitz()),
            Expr::Abs(a) | Expr::Complement(a) | Expr::Clamp(a) => a.lipschitz(),
            Expr::Avg(items) => {
                items.iter().map(Expr::lipschitz).sum::<f64>() / items.len() as f64
            }
            Expr::Table(t, items) => {
                // |T(e(x)) - T(e(y))| <= L_T * max_i |e_i(x) - e_i(y)|
                let inner = items
                    .iter()
                    .map(Expr::lipschitz)
                    .fold(0.0f64, f64::max);
                t.lipschitz() * inner
            }
        }
    }

    /// Substitutes `subs[i]` for each `Proj(i)`.
    pub fn compose(&self, subs: &[Expr]) -> Expr {
        match self {
            Expr::Const(c) => Expr::Const(*c),
            Expr::Proj(i) => subs[*i].clone(),
            Expr::Sum(a, b) => Expr::sum(a.compose(subs), b.compose(subs)),
            Expr::Diff(a, b) => Expr::diff(a.compose(subs), b.compose(subs)),
            Expr::Prod(a, b) => Expr::prod(a.compose(subs), b.compose(subs)),
            Expr::Min(a, b) => Expr::min(a.compose(subs), b.compose(subs)),
            Expr::Max(a, b) => Expr::max(a.compose(subs), b.compose(subs)),
            Expr::Abs(a) => Expr::abs(a.compose(subs)),
            Expr::Complement(a) => Expr::complement(a.compose(subs)),
            Expr::Avg(items) => Expr::Avg(items.iter().map(|e| e.compose(subs)).collect()),
            Expr::Clamp(a) => Expr::clamp(a.compose(subs)),
            Expr::Table(t, items) => Expr::Table(
                Arc::clone(t),
                items.iter().map(|e| e.compose(subs)).collect(),
            ),
        }
    }

    /// Renumbers `Proj(i)` to `Proj(map[i])`.
    pub fn remap(&self, map: &[usize]) -> Expr {
        let subs: Vec<Expr> = map.iter().map(|&j| Expr::Proj(j)).collect();
        self.compose(&subs)
    }
}

/// A named continuous connective `[0,1]^arity -> [0,1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawConnective")]
pub struct Connective {
    name: String,
    arity: usize,
    expr: Expr,
}

#[derive(Deserialize)]
struct RawConnective {
    name: String,
    arity: usize,
    expr: Expr,
}

impl TryFrom<RawConnective> for Connective {
    type Error = Error;

    fn try_from(raw: RawConnective) -> Result<Self> {
        Connective::new(raw.name, raw.arity, raw.expr)
    }
}

impl Connective {
    /// Validates the expression against the arity and guarantees the
    /// codomain `[0,1]` by clamping at the root unless interval analysis
    /// already proves the range safe.
    pub fn new(name: impl Into<String>, arity: usize, expr: Expr) -> Result<Self> {
        expr.validate(arity)?;
        let (lo, hi) = expr.bounds();
        let expr = if lo < 0.0 || hi > 1.0 {
            Expr::clamp(expr)
        } else {
            expr
        };
        Ok(Self {
            name: name.into(),
            arity,
            expr,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    /// Evaluates with an arity check.
    pub fn eval(&self, args: &[f64]) -> Result<f64> {
        if args.len() != self.arity {
            return Err(Error::Formula(format!(
                "connective `{}` of arity {} applied to {} arguments",
                self.name,
                self.arity,
                args.len()
            )));
        }
        Ok(self.eval_unchecked(args))
    }

    /// Evaluates assuming the argument count was checked at construction
    /// time of the enclosing formula.
    #[inline]
    pub fn eval_unchecked(&self, args: &[f64]) -> f64 {
        debug_assert_eq!(args.len(), self.arity);
        self.expr.eval(args)
    }

    /// Sup-norm Lipschitz bound.
    pub fn lipschitz(&self) -> f64 {
        self.expr.lipschitz()
    }
}

impl std::fmt::Display for Connective {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.name)
    }
}
