//! The Fefferman-Graham rule as a rewrite on formal invariant expressions.

use conflab::fg_rule::{a_tilde, fg_transform, fg_transform_in_dim, InvariantExpr, Primitive};
use conflab::invariants::{heat_expression, InvariantName};
use num_rational::Rational64;

fn main() -> conflab::Result<()> {
    for j in 0..=3 {
        let a = heat_expression(j)?;
        println!("a_{w}  = {a}\na~_{w} = {}\n", fg_transform(&a)?, w = 2 * j);
    }
    assert_eq!(fg_transform(&heat_expression(2)?)?, a_tilde(2)?);

    // linear: Ricci-bearing terms drop out, curvature becomes Weyl
    let e = InvariantExpr::from_terms(
        4,
        [
            (Primitive::Invariant(InvariantName::RiemSq), Rational64::new(3, 2)),
            (Primitive::Invariant(InvariantName::KappaSq), Rational64::new(-7, 1)),
        ],
    )?;
    println!("{e}  ->  {}", fg_transform(&e)?);

    // outside the table
    let odd = InvariantExpr::from_terms(4, [(Primitive::Named("|Ric|^2 kappa / kappa".into(), 4), Rational64::new(1, 1))])?;
    println!("{:?}", fg_transform(&odd).err());
    // in even n the rule is only defined up to weight n
    println!("{:?}", fg_transform_in_dim(&heat_expression(3)?, 4).err());
    Ok(())
}
