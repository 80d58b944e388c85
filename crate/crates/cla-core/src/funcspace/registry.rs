//! Named builtin connectives and their text-form lookup.

use std::collections::HashMap;
use std::sync::Arc;

use once_cell::sync::Lazy;

use crate::error::{Error, Result};
use crate::funcspace::{Connective, Expr, TabulatedConnective};

fn fixed_builtins() -> HashMap<&'static str, Arc<Connective>> {
    let p0 = || Expr::Proj(0);
    let p1 = || Expr::Proj(1);
    let one = || Expr::Const(1.0);
    let zero = || Expr::Const(0.0);

    let mut m: HashMap<&'static str, Arc<Connective>> = HashMap::new();
    let mut put = |name: &'static str, arity: usize, expr: Expr| {
        m.insert(name, Arc::new(Connective::new(name, arity, expr).unwrap()));
    };

    put("not", 1, Expr::complement(p0()));
    // Łukasiewicz operations.
    put(
        "and",
        2,
        Expr::max(zero(), Expr::diff(Expr::sum(p0(), p1()), one())),
    );
    put("or", 2, Expr::min(one(), Expr::sum(p0(), p1())));
    put(
        "implies",
        2,
        Expr::min(one(), Expr::sum(Expr::complement(p0()), p1())),
    );
    put("abs_diff", 2, Expr::abs(Expr::diff(p0(), p1())));
    put("identity", 1, p0());
    m
}

static FIXED: Lazy<HashMap<&'static str, Arc<Connective>>> = Lazy::new(fixed_builtins);

fn fold_binary(build: fn(Expr, Expr) -> Expr, k: usize) -> Expr {
    let mut expr = Expr::Proj(k - 1);
    for i in (0..k - 1).rev() {
        expr = build(Expr::Proj(i), expr);
    }
    expr
}

/// `min` of `k >= 1` arguments (`min1` is the identity).
pub fn min_k(k: usize) -> Result<Arc<Connective>> {
    variadic("min", k)
}

/// `max` of `k >= 1` arguments.
pub fn max_k(k: usize) -> Result<Arc<Connective>> {
    variadic("max", k)
}

/// Arithmetic mean of `k >= 1` arguments.
pub fn avg_k(k: usize) -> Result<Arc<Connective>> {
    variadic("avg", k)
}

fn variadic(family: &str, k: usize) -> Result<Arc<Connective>> {
    if k == 0 {
        return Err(Error::Formula(format!(
            "connective family `{family}` needs at least one argument"
        )));
    }
    let name = format!("{family}{k}");
    let expr = match family {
        "min" => fold_binary(Expr::min, k),
        "max" => fold_binary(Expr::max, k),
        "avg" => Expr::Avg((0..k).map(Expr::Proj).collect()),
        _ => unreachable!("unknown variadic family"),
    };
    Ok(Arc::new(Connective::new(name, k, expr)?))
}

/// The nullary connective with constant value `c`.
pub fn const_conn(c: f64) -> Result<Arc<Connective>> {
    Ok(Arc::new(Connective::new(
        format!("const({c})"),
        0,
        Expr::Const(c),
    )?))
}

/// Wraps a tabulated function as a connective applied to its inputs in order.
pub fn tabulated_conn(name: impl Into<String>, table: TabulatedConnective) -> Arc<Connective> {
    let arity = table.arity();
    let inputs = (0..arity).map(Expr::Proj).collect();
    Arc::new(
        Connective::new(name, arity, Expr::Table(Arc::new(table), inputs))
            .expect("tabulated values are validated to lie in [0,1]"),
    )
}

/// Wraps a raw expression as an anonymous connective (used by flattening).
pub fn flat_conn(arity: usize, expr: Expr) -> Result<Arc<Connective>> {
    Ok(Arc::new(Connective::new("<flat>", arity, expr)?))
}

/// Resolves a registry name as used by the formula DSL: `not`, `and`, `or`,
/// `implies`, `abs_diff`, `identity`, and the families `min2..minK`,
/// `max2..maxK`, `avg2..avgK`.
pub fn builtin(name: &str) -> Result<Arc<Connective>> {
    if let Some(c) = FIXED.get(name) {
        return Ok(Arc::clone(c));
    }
    for family in ["min", "max", "avg"] {
        if let Some(rest) = name.strip_prefix(family) {
            if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
                let k: usize = rest
                    .parse()
                    .map_err(|_| Error::Formula(format!("bad connective name `{name}`")))?;
                if k < 2 {
                    return Err(Error::Formula(format!(
                        "connective `{name}` is not registered; the `{family}` family starts at {family}2"
                    )));
                }
                if k > 64 {
                    return Err(Error::Formula(format!(
                        "connective `{name}` arity beyond the supported maximum of 64"
                    )));
                }
                return variadic(family, k);
            }
        }
    }
    Err(Error::Formula(format!("unknown connective `{name}`")))
}
