//! Direct evaluation of formulas on structures.
//!
//! An [`Evaluator`] compiles a formula against a signature and a declared
//! free-variable tuple once (resolving relation names and variable
//! positions), then evaluates it on any structure and assignment.
//!
//! An aggregation `F{y}(φ)` folds `F` over the body's values at every
//! domain element outside the range of the *entire* ambient assignment —
//! the declared tuple plus all enclosing binders, whether or not the body
//! mentions them. If no element remains, evaluation fails: the empty
//! aggregation is undefined. A first-order quantifier, by contrast, ranges
//! over the whole domain.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::funcspace::{Aggregator, Connective};
use crate::logic::{Formula, Quantifier, Signature, Var};
use crate::measure::ContinuousStructure;

enum Node {
    Const(f64),
    /// Scope positions to compare.
    Eq(usize, usize),
    /// Relation's signature index plus scope positions of its arguments.
    Atom(usize, Vec<usize>),
    Conn(Arc<Connective>, Vec<Node>),
    /// The binder occupies the next scope position during evaluation.
    Agg(Aggregator, Box<Node>),
    Quant(Quantifier, Box<Node>),
}

/// A formula compiled for repeated evaluation at a fixed declared tuple.
pub struct Evaluator {
    node: Node,
    num_declared: usize,
}

impl Evaluator {
    pub fn new(sig: &Signature, formula: &Formula, declared: &[Var]) -> Result<Evaluator> {
        formula.validate(sig)?;
        let mut positions: HashMap<&Var, usize> = HashMap::new();
        for (i, v) in declared.iter().enumerate() {
            if positions.insert(v, i).is_some() {
                return Err(Error::Assignment(format!(
                    "variable `{v}` appears twice in the declared tuple"
                )));
            }
        }
        for v in formula.free_vars() {
            if !positions.contains_key(&v) {
                return Err(Error::Assignment(format!(
                    "free variable `{v}` missing from the declared tuple"
                )));
            }
        }
        let mut scope: Vec<Var> = declared.to_vec();
        let node = compile(sig, formula, &mut scope)?;
        Ok(Evaluator {
            node,
            num_declared: declared.len(),
        })
    }

    /// Evaluates on `structure` at the given assignment (0-based domain
    /// elements, aligned with the declared tuple; repeats are fine).
    pub fn eval(&self, structure: &ContinuousStructure, elements: &[usize]) -> Result<f64> {
        if elements.len() != self.num_declared {
            return Err(Error::Assignment(format!(
                "assignment has {} elements for a {}-variable tuple",
                elements.len(),
                self.num_declared
            )));
        }
        let n = structure.n();
        if let Some(&e) = elements.iter().find(|&&e| e >= n) {
            return Err(Error::Assignment(format!(
                "element {e} outside a domain of size {n}"
            )));
        }
        let mut scope: Vec<usize> = elements.to_vec();
        eval_node(&self.node, structure, &mut scope)
    }
}

fn compile(sig: &Signature, f: &Formula, scope: &mut Vec<Var>) -> Result<Node> {
    Ok(match f {
        Formula::Const { value } => Node::Const(*value),
        Formula::Eq { left, right } => Node::Eq(position(scope, left)?, position(scope, right)?),
        Formula::Atom { rel, args } => {
            let idx = sig
                .index_of(rel)
                .ok_or_else(|| Error::Formula(format!("unknown relation `{rel}`")))?;
            let args = args
                .iter()
                .map(|v| position(scope, v))
                .collect::<Result<_>>()?;
            Node::Atom(idx, args)
        }
        Formula::Conn { conn, args } => Node::Conn(
            Arc::clone(conn),
            args.iter()
                .map(|g| compile(sig, g, scope))
                .collect::<Result<_>>()?,
        ),
        Formula::Agg { agg, var, body } => {
            if scope.contains(var) {
                return Err(Error::Formula(format!(
                    "binder `{var}` collides with a variable already in scope"
                )));
            }
            scope.push(var.clone());
            let body = compile(sig, body, scope)?;
            scope.pop();
            Node::Agg(agg.clone(), Box::new(body))
        }
        Formula::Quant {
            quantifier,
            var,
            body,
        } => {
            if scope.contains(var) {
                return Err(Error::Formula(format!(
                    "binder `{var}` collides with a variable already in scope"
                )));
            }
            scope.push(var.clone());
            let body = compile(sig, body, scope)?;
            scope.pop();
            Node::Quant(*quantifier, Box::new(body))
        }
    })
}

fn position(scope: &[Var], v: &Var) -> Result<usize> {
    scope
        .iter()
        .rposition(|s| s == v)
        .ok_or_else(|| Error::Assignment(format!("variable `{v}` is not in scope")))
}

fn eval_node(
    node: &Node,
    structure: &ContinuousStructure,
    scope: &mut Vec<usize>,
) -> Result<f64> {
    Ok(match node {
        Node::Const(v) => *v,
        Node::Eq(i, j) => {
            if scope[*i] == scope[*j] {
                1.0
            } else {
                0.0
            }
        }
        Node::Atom(rel, args) => {
            let mut tuple = [0usize; 8];
            for (slot, &pos) in tuple.iter_mut().zip(args.iter()) {
                *slot = scope[pos];
            }
            structure.value(*rel, &tuple[..args.len()])
        }
        Node::Conn(conn, args) => {
            let mut buf = [0.0f64; 8];
            if args.len() <= buf.len() {
                for (slot, a) in buf.iter_mut().zip(args.iter()) {
                    *slot = eval_node(a, structure, scope)?;
                }
                conn.eval_unchecked(&buf[..args.len()])
            } else {
                let vals = args
                    .iter()
                    .map(|a| eval_node(a, structure, scope))
                    .collect::<Result<Vec<_>>>()?;
                conn.eval_unchecked(&vals)
            }
        }
        Node::Agg(agg, body) => {
            let n = structure.n();
            let depth = scope.len();
            match agg {
                // Stream the fold; `am` uses compensated summation.
                Aggregator::Min | Aggregator::Max | Aggregator::Am => {
                    let mut acc = match agg {
                        Aggregator::Min => f64::INFINITY,
                        Aggregator::Max => f64::NEG_INFINITY,
                        _ => 0.0,
                    };
                    let mut comp = 0.0;
                    let mut count = 0usize;
                    for b in 0..n {
                        if scope[..depth].contains(&b) {
                            continue;
                        }
                        scope.push(b);
                        let v = eval_node(body, structure, scope);
                        scope.pop();
                        let v = v?;
                        match agg {
                            Aggregator::Min => acc = acc.min(v),
                            Aggregator::Max => acc = acc.max(v),
                            _ => {
                                let y = v - comp;
                                let t = acc + y;
                                comp = (t - acc) - y;
                                acc = t;
                            }
                        }
                        count += 1;
                    }
                    if count == 0 {
                        return Err(Error::EmptyAggregation);
                    }
                    match agg {
                        Aggregator::Am => acc / count as f64,
                        _ => acc,
                    }
                }
                Aggregator::External(_) => {
                    let mut vals = Vec::with_capacity(n);
                    for b in 0..n {
                        if scope[..depth].contains(&b) {
                            continue;
                        }
                        scope.push(b);
                        let v = eval_node(body, structure, scope);
                        scope.pop();
                        vals.push(v?);
                    }
                    agg.eval(&vals)?
                }
            }
        }
        Node::Quant(q, body) => {
            let mut acc = match q {
                Quantifier::Exists => f64::NEG_INFINITY,
                Quantifier::Forall => f64::INFINITY,
            };
            for b in 0..structure.n() {
                scope.push(b);
                let v = eval_node(body, structure, scope);
                scope.pop();
                let v = v?;
                acc = match q {
                    Quantifier::Exists => acc.max(v),
                    Quantifier::Forall => acc.min(v),
                };
            }
            acc
        }
    })
}

/// One-shot convenience: compile and evaluate.
pub fn evaluate(
    sig: &Signature,
    formula: &Formula,
    declared: &[Var],
    structure: &ContinuousStructure,
    elements: &[usize],
) -> Result<f64> {
    Evaluator::new(sig, formula, declared)?.eval(structure, elements)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;
    use crate::measure::{sample_structure, DensityModel};
    use approx::assert_abs_diff_eq;

    fn sig() -> Signature {
        Signature::from_pairs(vec![("R", 1), ("E", 2)]).unwrap()
    }

    fn structure(n: usize, seed: u64) -> ContinuousStructure {
        sample_structure(&DensityModel::uniform(sig()), n, seed, 0).unwrap()
    }

    fn eval_str(src: &str, s: &ContinuousStructure, elements: &[usize]) -> Result<f64> {
        let f = parse_formula(src, &sig()).unwrap();
        let declared = f.free_var_tuple();
        evaluate(&sig(), &f, &declared, s, elements)
    }

    #[test]
    fn base_cases() {
        let s = structure(4, 1);
        assert_eq!(eval_str("0.25", &s, &[]).unwrap(), 0.25);
        assert_eq!(eval_str("x = y", &s, &[2, 2]).unwrap(), 1.0);
        assert_eq!(eval_str("x = y", &s, &[2, 3]).unwrap(), 0.0);
        assert_eq!(eval_str("E(x, y)", &s, &[1, 3]).unwrap(), s.value(1, &[1, 3]));
        assert_eq!(eval_str("R(x)", &s, &[2]).unwrap(), s.value(0, &[2]));
    }

    #[test]
    fn connectives_compose() {
        let s = structure(4, 2);
        let direct = eval_str("implies(R(x), E(x, y))", &s, &[1, 2]).unwrap();
        let r = s.value(0, &[1]);
        let e = s.value(1, &[1, 2]);
        assert_abs_diff_eq!(direct, (1.0 - r + e).min(1.0), epsilon = 1e-15);
    }

    #[test]
    fn aggregation_excludes_the_whole_ambient_assignment() {
        let s = structure(5, 3);
        // Declared tuple (x, z); z does not occur in the body but its value
        // is still excluded from the aggregation range.
        let f = parse_formula("am{y}(E(x, y))", &sig()).unwrap();
        let ev = Evaluator::new(&sig(), &f, &[Var::new("x"), Var::new("z")]).unwrap();
        let direct = ev.eval(&s, &[1, 3]).unwrap();
        let mean = [0usize, 2, 4]
            .iter()
            .map(|&b| s.value(1, &[1, b]))
            .sum::<f64>()
            / 3.0;
        assert_abs_diff_eq!(direct, mean, epsilon = 1e-12);
    }

    #[test]
    fn nested_binders_join_the_exclusion_set() {
        let s = structure(4, 4);
        // Declared tuple (x) pinned to 0: y ranges over {1,2,3}; inside,
        // z skips {0, y}.
        let f = parse_formula("min{y}(am{z}(E(y, z)))", &sig()).unwrap();
        let ev = Evaluator::new(&sig(), &f, &[Var::new("x")]).unwrap();
        let v = ev.eval(&s, &[0]).unwrap();
        let mut expected = f64::INFINITY;
        for y in 1..4 {
            let inner: f64 = (0..4)
                .filter(|&z| z != 0 && z != y)
                .map(|z| s.value(1, &[y, z]))
                .sum::<f64>()
                / 2.0;
            expected = expected.min(inner);
        }
        assert_abs_diff_eq!(v, expected, epsilon = 1e-12);
    }

    #[test]
    fn empty_aggregation_is_an_error() {
        let s = structure(2, 5);
        // Two declared elements exhaust a 2-element domain.
        let f = parse_formula("am{y}(E(x, y))", &sig()).unwrap();
        let ev = Evaluator::new(&sig(), &f, &[Var::new("x"), Var::new("z")]).unwrap();
        assert!(matches!(
            ev.eval(&s, &[0, 1]),
            Err(Error::EmptyAggregation)
        ));
        // With one element left it succeeds.
        assert!(ev.eval(&s, &[0, 0]).is_ok());
    }

    #[test]
    fn quantifiers_range_over_the_whole_domain() {
        let s = structure(5, 6);
        let v = eval_str("exists y. E(x, y)", &s, &[2]).unwrap();
        let expected = (0..5).map(|b| s.value(1, &[2, b])).fold(f64::MIN, f64::max);
        assert_abs_diff_eq!(v, expected, epsilon = 1e-15);

        let v = eval_str("forall y. E(x, y)", &s, &[2]).unwrap();
        let expected = (0..5).map(|b| s.value(1, &[2, b])).fold(f64::MAX, f64::min);
        assert_abs_diff_eq!(v, expected, epsilon = 1e-15);
    }

    #[test]
    fn quantifier_expansion_agrees_with_direct_semantics() {
        let s = structure(6, 7);
        let f = parse_formula("exists y. max{z}(min2(E(x, z), E(y, z)))", &sig()).unwrap();
        let declared = f.free_var_tuple();
        let expanded = f.expand_quantifiers(&declared).unwrap();
        assert!(!expanded.to_string().contains("exists"));
        for x in 0..6 {
            let direct = evaluate(&sig(), &f, &declared, &s, &[x]).unwrap();
            let via = evaluate(&sig(), &expanded, &declared, &s, &[x]).unwrap();
            assert_abs_diff_eq!(direct, via, epsilon = 1e-12);
        }
    }

    #[test]
    fn assignment_errors() {
        let s = structure(3, 8);
        let f = parse_formula("R(x)", &sig()).unwrap();
        let ev = Evaluator::new(&sig(), &f, &[Var::new("x")]).unwrap();
        assert!(ev.eval(&s, &[]).is_err());
        assert!(ev.eval(&s, &[3]).is_err());
        // Declared tuple must cover the free variables.
        assert!(Evaluator::new(&sig(), &f, &[Var::new("y")]).is_err());
        // Binder may not collide with a declared name.
        let g = parse_formula("am{y}(E(x, y))", &sig()).unwrap();
        assert!(Evaluator::new(&sig(), &g, &[Var::new("x"), Var::new("y")]).is_err());
    }
}
