//! Normal forms for aggregation-free formulas.
//!
//! `flatten` rewrites nested connectives into a single connective applied to
//! pairwise-distinct atomic subformulas. `normalize_under` additionally fixes
//! an identity pattern for the free-variable tuple: equalities collapse to
//! constants, atom arguments collapse to their pattern block, and duplicate
//! atoms merge. What remains is either a constant or one connective over
//! distinct relation cells — the shape the probability integrator and the
//! aggregation-elimination step both consume.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::funcspace::{flat_conn, Connective, Expr};
use crate::logic::{Formula, IdentityPattern, Var};

/// Rewrites an aggregation-free formula as one connective applied to
/// pairwise-distinct leaves (atoms and equalities), preserving the value on
/// every structure. Constants are absorbed into the connective.
pub fn flatten(f: &Formula) -> Result<Formula> {
    let mut leaves: Vec<Formula> = Vec::new();
    let mut seen: HashMap<LeafKey, usize> = HashMap::new();
    let expr = flatten_expr(f, &mut leaves, &mut seen)?;
    Ok(Formula::Conn {
        conn: flat_conn(leaves.len(), expr)?,
        args: leaves,
    })
}

#[derive(PartialEq, Eq, Hash)]
enum LeafKey {
    Atom(String, Vec<Var>),
    Eq(Var, Var),
}

fn flatten_expr(
    f: &Formula,
    leaves: &mut Vec<Formula>,
    seen: &mut HashMap<LeafKey, usize>,
) -> Result<Expr> {
    let mut leaf = |key: LeafKey, formula: &Formula| -> Expr {
        let idx = *seen.entry(key).or_insert_with(|| {
            leaves.push(formula.clone());
            leaves.len() - 1
        });
        Expr::Proj(idx)
    };
    match f {
        Formula::Const { value } => Ok(Expr::Const(*value)),
        Formula::Eq { left, right } => Ok(leaf(LeafKey::Eq(left.clone(), right.clone()), f)),
        Formula::Atom { rel, args } => Ok(leaf(LeafKey::Atom(rel.clone(), args.clone()), f)),
        Formula::Conn { conn, args } => {
            let subs: Vec<Expr> = args
                .iter()
                .map(|g| flatten_expr(g, leaves, seen))
                .collect::<Result<_>>()?;
            Ok(conn.expr().compose(&subs))
        }
        Formula::Agg { .. } | Formula::Quant { .. } => Err(Error::NotAggregationFree),
    }
}

/// An atom whose arguments are pattern blocks (0-based) of the ambient
/// free-variable tuple. Two normal atoms are equal exactly when they read
/// the same relation cell under every assignment matching the pattern.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NormalAtom {
    pub rel: String,
    pub blocks: Vec<usize>,
}

impl NormalAtom {
    /// The identity pattern of this atom's own argument tuple.
    pub fn pattern(&self) -> IdentityPattern {
        IdentityPattern::of_tuple(&self.blocks)
    }
}

/// An aggregation-free formula specialized to one identity pattern.
#[derive(Debug, Clone)]
pub enum NormalizedFormula {
    /// The formula's value does not depend on the structure.
    Constant(f64),
    /// One connective over pairwise-distinct relation cells.
    Atomic {
        conn: Arc<Connective>,
        atoms: Vec<NormalAtom>,
    },
}

impl NormalizedFormula {
    pub fn num_atoms(&self) -> usize {
        match self {
            NormalizedFormula::Constant(_) => 0,
            NormalizedFormula::Atomic { atoms, .. } => atoms.len(),
        }
    }

    /// Evaluates given one value per atom, in atom order.
    pub fn value_on(&self, atom_values: &[f64]) -> f64 {
        match self {
            NormalizedFormula::Constant(c) => *c,
            NormalizedFormula::Atomic { conn, .. } => conn.eval_unchecked(atom_values),
        }
    }
}

/// Specializes an aggregation-free formula to assignments of `vars` whose
/// identity pattern is exactly `pattern`: equalities become 0/1, atom
/// arguments are replaced by their block, duplicate atoms merge.
pub fn normalize_under(
    f: &Formula,
    vars: &[Var],
    pattern: &IdentityPattern,
) -> Result<NormalizedFormula> {
    if pattern.size() != vars.len() {
        return Err(Error::Pattern(format!(
            "pattern describes {} positions but the tuple has {} variables",
            pattern.size(),
            vars.len()
        )));
    }
    let mut position: HashMap<&Var, usize> = HashMap::new();
    for (i, v) in vars.iter().enumerate() {
        if position.insert(v, i).is_some() {
            return Err(Error::Assignment(format!(
                "variable `{v}` appears twice in the declared tuple"
            )));
        }
    }
    for v in f.free_vars() {
        if !position.contains_key(&v) {
            return Err(Error::Assignment(format!(
                "free variable `{v}` missing from the declared tuple"
            )));
        }
    }

    let flat = flatten(f)?;
    let (flat_connective, leaves) = match flat {
        Formula::Conn { conn, args } => (conn, args),
        _ => unreachable!("flatten always returns a connective application"),
    };

    let mut atoms: Vec<NormalAtom> = Vec::new();
    let mut seen: HashMap<NormalAtom, usize> = HashMap::new();
    let subs: Vec<Expr> = leaves
        .iter()
        .map(|leaf| match leaf {
            Formula::Eq { left, right } => {
                let same = pattern.block_of(position[left]) == pattern.block_of(position[right]);
                Expr::Const(if same { 1.0 } else { 0.0 })
            }
            Formula::Atom { rel, args } => {
                let blocks = args
                    .iter()
                    .map(|v| pattern.block_of(position[v]))
                    .collect();
                let atom = NormalAtom {
                    rel: rel.clone(),
                    blocks,
                };
                let idx = *seen.entry(atom.clone()).or_insert_with(|| {
                    atoms.push(atom);
                    atoms.len() - 1
                });
                Expr::Proj(idx)
            }
            _ => unreachable!("flatten leaves are atoms and equalities"),
        })
        .collect();

    let expr = flat_connective.expr().compose(&subs);
    if atoms.is_empty() {
        Ok(NormalizedFormula::Constant(
            expr.eval(&[]).clamp(0.0, 1.0),
        ))
    } else {
        Ok(NormalizedFormula::Atomic {
            conn: flat_conn(atoms.len(), expr)?,
            atoms,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_formula, Signature};
    use approx::assert_abs_diff_eq;

    fn sig() -> Signature {
        Signature::from_pairs(vec![("R", 1), ("E", 2)]).unwrap()
    }

    /// Direct evaluator over a leaf-text -> value table, the oracle for
    /// value preservation.
    fn eval_direct(f: &Formula, leaf_values: &HashMap<String, f64>) -> f64 {
        match f {
            Formula::Const { value } => *value,
            Formula::Eq { .. } | Formula::Atom { .. } => leaf_values[&f.to_string()],
            Formula::Conn { conn, args } => {
                let vals: Vec<f64> = args.iter().map(|g| eval_direct(g, leaf_values)).collect();
                conn.eval_unchecked(&vals)
            }
            _ => panic!("aggregation-free formulas only"),
        }
    }

    #[test]
    fn flatten_merges_duplicate_leaves() {
        let f = parse_formula("and(E(x,y), or(E(x,y), R(x)))", &sig()).unwrap();
        let flat = flatten(&f).unwrap();
        let (conn, args) = match &flat {
            Formula::Conn { conn, args } => (conn, args),
            _ => unreachable!(),
        };
        assert_eq!(args.len(), 2);
        assert_eq!(args[0].to_string(), "E(x, y)");
        assert_eq!(args[1].to_string(), "R(x)");

        for &(e, r) in &[(0.0, 0.0), (0.3, 0.9), (0.7, 0.2), (1.0, 1.0)] {
            let mut table = HashMap::new();
            table.insert("E(x, y)".to_string(), e);
            table.insert("R(x)".to_string(), r);
            assert_abs_diff_eq!(
                conn.eval(&[e, r]).unwrap(),
                eval_direct(&f, &table),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn flatten_handles_constants_and_equalities() {
        let f = parse_formula("implies(x = y, max3(0.25, R(x), R(y)))", &sig()).unwrap();
        let flat = flatten(&f).unwrap();
        let (conn, args) = match &flat {
            Formula::Conn { conn, args } => (conn, args),
            _ => unreachable!(),
        };
        assert_eq!(args.len(), 3); // x = y, R(x), R(y)
        let value = conn.eval(&[1.0, 0.1, 0.2]).unwrap();
        assert_abs_diff_eq!(value, 0.25, epsilon = 1e-12); // implies(1, 0.25)
    }

    #[test]
    fn flatten_rejects_aggregation() {
        let f = parse_formula("am{y}(E(x,y))", &sig()).unwrap();
        assert!(matches!(flatten(&f), Err(Error::NotAggregationFree)));
    }

    #[test]
    fn equalities_resolve_by_pattern() {
        let s = sig();
        let f = parse_formula("x = y", &s).unwrap();
        let vars = [Var::new("x"), Var::new("y")];
        let merged = IdentityPattern::from_blocks(&[vec![1, 2]]).unwrap();
        let split = IdentityPattern::all_distinct(2);
        match normalize_under(&f, &vars, &merged).unwrap() {
            NormalizedFormula::Constant(c) => assert_eq!(c, 1.0),
            other => panic!("expected constant, got {other:?}"),
        }
        match normalize_under(&f, &vars, &split).unwrap() {
            NormalizedFormula::Constant(c) => assert_eq!(c, 0.0),
            other => panic!("expected constant, got {other:?}"),
        }
    }

    #[test]
    fn atoms_collapse_to_blocks_and_merge() {
        let s = sig();
        // Under x = y, the two atoms read the same cell.
        let f = parse_formula("and(E(x,y), E(y,x))", &s).unwrap();
        let vars = [Var::new("x"), Var::new("y")];
        let merged = IdentityPattern::from_blocks(&[vec![1, 2]]).unwrap();
        match normalize_under(&f, &vars, &merged).unwrap() {
            NormalizedFormula::Atomic { conn, atoms } => {
                assert_eq!(atoms.len(), 1);
                assert_eq!(atoms[0].rel, "E");
                assert_eq!(atoms[0].blocks, vec![0, 0]);
                // and(e, e) = max(0, 2e - 1).
                assert_abs_diff_eq!(conn.eval(&[0.8]).unwrap(), 0.6, epsilon = 1e-12);
                assert_abs_diff_eq!(conn.eval(&[0.3]).unwrap(), 0.0, epsilon = 1e-12);
            }
            other => panic!("expected atomic form, got {other:?}"),
        }
        // Distinct x, y: the atoms stay separate.
        match normalize_under(&f, &vars, &IdentityPattern::all_distinct(2)).unwrap() {
            NormalizedFormula::Atomic { atoms, .. } => {
                assert_eq!(atoms.len(), 2);
                assert_eq!(atoms[0].blocks, vec![0, 1]);
                assert_eq!(atoms[1].blocks, vec![1, 0]);
            }
            other => panic!("expected atomic form, got {other:?}"),
        }
    }

    #[test]
    fn mixed_equality_and_atom() {
        let s = sig();
        let f = parse_formula("and(E(x,y), x = y)", &s).unwrap();
        let vars = [Var::new("x"), Var::new("y")];
        let merged = IdentityPattern::from_blocks(&[vec![1, 2]]).unwrap();
        match normalize_under(&f, &vars, &merged).unwrap() {
            NormalizedFormula::Atomic { conn, atoms } => {
                assert_eq!(atoms.len(), 1);
                // and(e, 1) = e.
                assert_abs_diff_eq!(conn.eval(&[0.37]).unwrap(), 0.37, epsilon = 1e-12);
            }
            other => panic!("expected atomic form, got {other:?}"),
        }
    }

    #[test]
    fn normal_atom_pattern() {
        let atom = NormalAtom {
            rel: "T".into(),
            blocks: vec![2, 0, 2],
        };
        assert_eq!(
            atom.pattern(),
            IdentityPattern::from_blocks(&[vec![1, 3], vec![2]]).unwrap()
        );
    }

    #[test]
    fn tuple_validation() {
        let s = sig();
        let f = parse_formula("R(x)", &s).unwrap();
        // Pattern size mismatch.
        assert!(normalize_under(&f, &[Var::new("x")], &IdentityPattern::all_distinct(2)).is_err());
        // Free variable not covered.
        assert!(normalize_under(&f, &[Var::new("y")], &IdentityPattern::all_distinct(1)).is_err());
        // Duplicate tuple variable.
        assert!(normalize_under(
            &f,
            &[Var::new("x"), Var::new("x")],
            &IdentityPattern::all_distinct(2)
        )
        .is_err());
        // Extra declared variables are fine.
        let ok = normalize_under(
            &f,
            &[Var::new("x"), Var::new("z")],
            &IdentityPattern::all_distinct(2),
        );
        assert!(ok.is_ok());
    }
}
