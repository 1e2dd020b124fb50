//! Truncated Taylor jets: exact partial derivatives by arithmetic.

use conflab::jet::Jet;

fn main() -> conflab::Result<()> {
    // f(x, y) = sin(x) * exp(x*y) at (0.3, -1.2), up to order 4
    let x = Jet::variable(0, 0.3, 2, 4)?;
    let y = Jet::variable(1, -1.2, 2, 4)?;
    let f = &x.sin() * &(&x * &y).exp();

    println!("f        = {:.12}", f.value());
    for alpha in [[1, 0], [0, 1], [2, 0], [1, 1], [2, 2], [4, 0]] {
        println!("d{alpha:?} f = {:.12}", f.partial(&alpha)?);
    }

    // division and powers reuse the same series machinery
    let g = f.try_div(&x.add_scalar(1.0))?.powf(1.5)?;
    println!("((f/(1+x))^1.5)_xy = {:.12}", g.partial(&[1, 1])?);

    // mismatched shapes are refused rather than padded
    let short = Jet::variable(0, 0.3, 2, 2)?;
    println!("order 4 + order 2: {:?}", f.try_add(&short).err());
    Ok(())
}
