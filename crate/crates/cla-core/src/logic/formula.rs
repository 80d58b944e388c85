//! Formula ASTs.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::{max_k, min_k, Aggregator, Connective};
use crate::logic::Signature;

/// A variable name. Cheap to clone; ordered by name.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Var(Arc<str>);

impl Var {
    pub fn new(name: impl AsRef<str>) -> Self {
        Var(Arc::from(name.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Self {
        Var::new(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantifier {
    Exists,
    Forall,
}

/// A formula of continuous logic with aggregation functions.
///
/// Values live in `[0,1]`: constants are their own value, equalities are
/// 0/1-valued, atoms read the structure, connectives apply a continuous
/// function to subformula values, and an aggregation applies an aggregator
/// to the body's values over all domain elements outside the current
/// assignment's range. `Exists`/`Forall` are first-order sugar: they
/// evaluate as max/min over the whole domain and expand into aggregations
/// via [`Formula::expand_quantifiers`].
///
/// Binder discipline: bound variables are renamed apart by the parser, so a
/// binder never shadows an enclosing binder and never collides with a free
/// variable. Programmatic constructors enforce the same discipline locally;
/// [`Formula::validate`] re-checks it globally.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Formula {
    Const {
        value: f64,
    },
    Eq {
        left: Var,
        right: Var,
    },
    Atom {
        rel: String,
        args: Vec<Var>,
    },
    Conn {
        conn: Arc<Connective>,
        args: Vec<Formula>,
    },
    Agg {
        agg: Aggregator,
        var: Var,
        body: Box<Formula>,
    },
    Quant {
        quantifier: Quantifier,
        var: Var,
        body: Box<Formula>,
    },
}

impl Formula {
    pub fn constant(value: f64) -> Result<Formula> {
        if !value.is_finite() || !(0.0..=1.0).contains(&value) {
            return Err(Error::Formula(format!(
                "constant {value} outside [0,1]"
            )));
        }
        Ok(Formula::Const { value })
    }

    pub fn eq(left: impl Into<Var>, right: impl Into<Var>) -> Formula {
        Formula::Eq {
            left: left.into(),
            right: right.into(),
        }
    }

    pub fn atom(sig: &Signature, rel: &str, args: Vec<Var>) -> Result<Formula> {
        match sig.arity_of(rel) {
            None => Err(Error::Formula(format!("unknown relation `{rel}`"))),
            Some(arity) if arity != args.len() => Err(Error::Formula(format!(
                "relation `{rel}` has arity {arity} but got {} arguments",
                args.len()
            ))),
            Some(_) => Ok(Formula::Atom {
                rel: rel.to_string(),
                args,
            }),
        }
    }

    pub fn conn(conn: Arc<Connective>, args: Vec<Formula>) -> Result<Formula> {
        if conn.arity() != args.len() {
            return Err(Error::Formula(format!(
                "connective `{}` has arity {} but got {} subformulas",
                conn.name(),
                conn.arity(),
                args.len()
            )));
        }
        Ok(Formula::Conn { conn, args })
    }

    pub fn agg(agg: Aggregator, var: impl Into<Var>, body: Formula) -> Result<Formula> {
        let var = var.into();
        if body.binds(&var) {
            return Err(Error::Formula(format!(
                "binder `{var}` is bound again inside its own body"
            )));
        }
        Ok(Formula::Agg {
            agg,
            var,
            body: Box::new(body),
        })
    }

    pub fn quant(quantifier: Quantifier, var: impl Into<Var>, body: Formula) -> Result<Formula> {
        let var = var.into();
        if body.binds(&var) {
            return Err(Error::Formula(format!(
                "binder `{var}` is bound again inside its own body"
            )));
        }
        Ok(Formula::Quant {
            quantifier,
            var,
            body: Box::new(body),
        })
    }

    /// Free variables, per the usual inductive definition (binders remove
    /// their variable).
    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<Var>) {
        match self {
            Formula::Const { .. } => {}
            Formula::Eq { left, right } => {
                out.insert(left.clone());
                out.insert(right.clone());
            }
            Formula::Atom { args, .. } => out.extend(args.iter().cloned()),
            Formula::Conn { args, .. } => {
                for f in args {
                    f.collect_free(out);
                }
            }
            Formula::Agg { var, body, .. } | Formula::Quant { var, body, .. } => {
                let mut inner = BTreeSet::new();
                body.collect_free(&mut inner);
                inner.remove(var);
                out.extend(inner);
            }
        }
    }

    /// The canonical declared tuple: free variables sorted by name.
    pub fn free_var_tuple(&self) -> Vec<Var> {
        self.free_vars().into_iter().collect()
    }

    /// Whether `v` is bound by some binder in this formula.
    pub fn binds(&self, v: &Var) -> bool {
        match self {
            Formula::Const { .. } | Formula::Eq { .. } | Formula::Atom { .. } => false,
            Formula::Conn { args, .. } => args.iter().any(|f| f.binds(v)),
            Formula::Agg { var, body, .. } | Formula::Quant { var, body, .. } => {
                var == v || body.binds(v)
            }
        }
    }

    /// Whether the formula contains no aggregation and no quantifier.
    pub fn is_aggregation_free(&self) -> bool {
        match self {
            Formula::Const { .. } | Formula::Eq { .. } | Formula::Atom { .. } => true,
            Formula::Conn { args, .. } => args.iter().all(Formula::is_aggregation_free),
            Formula::Agg { .. } | Formula::Quant { .. } => false,
        }
    }

    /// Full well-formedness check: atoms match the signature, connective
    /// arities are respected, constants lie in `[0,1]`, no binder shadows
    /// another on its path, and no binder reuses a free variable's name.
    pub fn validate(&self, sig: &Signature) -> Result<()> {
        let free = self.free_vars();
        let mut scope = Vec::new();
        self.validate_inner(sig, &free, &mut scope)
    }

    fn validate_inner(
        &self,
        sig: &Signature,
        free: &BTreeSet<Var>,
        scope: &mut Vec<Var>,
    ) -> Result<()> {
        match self {
            Formula::Const { value } => {
                if !value.is_finite() || !(0.0..=1.0).contains(value) {
                    return Err(Error::Formula(format!("constant {value} outside [0,1]")));
                }
            }
            Formula::Eq { .. } => {}
            Formula::Atom { rel, args } => match sig.arity_of(rel) {
                None => return Err(Error::Formula(format!("unknown relation `{rel}`"))),
                Some(arity) if arity != args.len() => {
                    return Err(Error::Formula(format!(
                        "relation `{rel}` has arity {arity} but got {} arguments",
                        args.len()
                    )))
                }
                Some(_) => {}
            },
            Formula::Conn { conn, args } => {
                if conn.arity() != args.len() {
                    return Err(Error::Formula(format!(
                        "connective `{}` has arity {} but got {} subformulas",
                        conn.name(),
                        conn.arity(),
                        args.len()
                    )));
                }
                for f in args {
                    f.validate_inner(sig, free, scope)?;
                }
            }
            Formula::Agg { var, body, .. } | Formula::Quant { var, body, .. } => {
                if scope.contains(var) {
                    return Err(Error::Formula(format!(
                        "binder `{var}` shadows an enclosing binder"
                    )));
                }
                if free.contains(var) {
                    return Err(Error::Formula(format!(
                        "binder `{var}` reuses a free variable's name"
                    )));
                }
                scope.push(var.clone());
                body.validate_inner(sig, free, scope)?;
                scope.pop();
            }
        }
        Ok(())
    }

    /// Replaces free occurrences of `from` by `to`. Safe from capture under
    /// the binder discipline (binders never collide with other names in
    /// scope).
    pub fn substitute(&self, from: &Var, to: &Var) -> Formula {
        let sub = |v: &Var| if v == from { to.clone() } else { v.clone() };
        match self {
            Formula::Const { value } => Formula::Const { value: *value },
            Formula::Eq { left, right } => Formula::Eq {
                left: sub(left),
                right: sub(right),
            },
            Formula::Atom { rel, args } => Formula::Atom {
                rel: rel.clone(),
                args: args.iter().map(sub).collect(),
            },
            Formula::Conn { conn, args } => Formula::Conn {
                conn: Arc::clone(conn),
                args: args.iter().map(|f| f.substitute(from, to)).collect(),
            },
            Formula::Agg { agg, var, body } => {
                if var == from {
                    // `from` is not free below this binder.
                    self.clone()
                } else {
                    Formula::Agg {
                        agg: agg.clone(),
                        var: var.clone(),
                        body: Box::new(body.substitute(from, to)),
                    }
                }
            }
            Formula::Quant {
                quantifier,
                var,
                body,
            } => {
                if var == from {
                    self.clone()
                } else {
                    Formula::Quant {
                        quantifier: *quantifier,
                        var: var.clone(),
                        body: Box::new(body.substitute(from, to)),
                    }
                }
            }
        }
    }

    /// Rewrites every first-order quantifier into aggregations, given the
    /// declared free-variable tuple the formula will be evaluated against.
    ///
    /// An existential over `y` with ambient variables `x_1..x_k` becomes
    /// `max_{k+1}(body[y:=x_1], …, body[y:=x_k], max{y}(body))`: the
    /// substituted copies cover domain elements hit by the ambient
    /// assignment, the aggregation covers the rest. Universals are dual
    /// with `min`. Inner quantifiers see enclosing binders as ambient.
    pub fn expand_quantifiers(&self, declared: &[Var]) -> Result<Formula> {
        for v in self.free_vars() {
            if !declared.contains(&v) {
                return Err(Error::Formula(format!(
                    "free variable `{v}` missing from the declared tuple"
                )));
            }
        }
        let mut ambient: Vec<Var> = declared.to_vec();
        self.expand_inner(&mut ambient)
    }

    fn expand_inner(&self, ambient: &mut Vec<Var>) -> Result<Formula> {
        match self {
            Formula::Const { .. } | Formula::Eq { .. } | Formula::Atom { .. } => Ok(self.clone()),
            Formula::Conn { conn, args } => Ok(Formula::Conn {
                conn: Arc::clone(conn),
                args: args
                    .iter()
                    .map(|f| f.expand_inner(ambient))
                    .collect::<Result<_>>()?,
            }),
            Formula::Agg { agg, var, body } => {
                ambient.push(var.clone());
                let body = body.expand_inner(ambient)?;
                ambient.pop();
                Formula::agg(agg.clone(), var.clone(), body)
            }
            Formula::Quant {
                quantifier,
                var,
                body,
            } => {
                ambient.push(var.clone());
                let body = body.expand_inner(ambient)?;
                ambient.pop();
                let (agg, conn_of) = match quantifier {
                    Quantifier::Exists => (Aggregator::Max, max_k as fn(usize) -> _),
                    Quantifier::Forall => (Aggregator::Min, min_k as fn(usize) -> _),
                };
                let tail = Formula::agg(agg, var.clone(), body.clone())?;
                let k = ambient.len();
                if k == 0 {
                    return Ok(tail);
                }
                let mut parts: Vec<Formula> = ambient
                    .iter()
                    .map(|x| body.substitute(var, x))
                    .collect();
                parts.push(tail);
                Formula::conn(conn_of(k + 1)?, parts)
            }
        }
    }
}

/// The standalone quantifier expansion: ambient variables default to the
/// free variables of the quantified formula, in name order.
pub fn expand_fo_quantifier(
    quantifier: Quantifier,
    var: impl Into<Var>,
    body: Formula,
) -> Result<Formula> {
    let q = Formula::quant(quantifier, var, body)?;
    let declared = q.free_var_tuple();
    q.expand_quantifiers(&declared)
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Const { value } => write!(f, "{value}"),
            Formula::Eq { left, right } => write!(f, "{left} = {right}"),
            Formula::Atom { rel, args } => {
                write!(f, "{rel}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
            Formula::Conn { conn, args } => {
                if args.is_empty() {
                    return write!(f, "{}", conn.name());
                }
                write!(f, "{}(", conn.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
            Formula::Agg { agg, var, body } => write!(f, "{agg}{{{var}}}({body})"),
            Formula::Quant {
                quantifier,
                var,
                body,
            } => {
                let kw = match quantifier {
                    Quantifier::Exists => "exists",
                    Quantifier::Forall => "forall",
                };
                write!(f, "{kw} {var}. {body}")
            }
        }
    }
}
