//! Residues at s = 1 of spectral zeta functions of P_k on round spheres,
//! against the integrated Green-function log coefficient.

use std::time::Instant;

use conflab::spectral::{geometric_side, zeta_residue_at_1, SphereSpectrum};

fn main() -> conflab::Result<()> {
    for (n, k) in [(2usize, 1u32), (4, 1), (4, 2), (6, 1), (6, 2), (6, 3)] {
        let start = Instant::now();
        let spectrum = SphereSpectrum::new(n, k, 2000)?;
        let est = zeta_residue_at_1(&spectrum)?;
        println!(
            "S^{n} P_{k}: 2k Res = {:+.10e}  integral of gamma = {:+.10e}  err est {:.1e}  excluded {:?}  ({:.0} ms)",
            2.0 * k as f64 * est.residue,
            geometric_side(n, k)?,
            est.error_estimate,
            est.excluded_modes,
            start.elapsed().as_secs_f64() * 1e3
        );
    }
    let s4 = SphereSpectrum::new(4, 2, 10)?;
    println!("\nS^4 Paneitz spectrum: {:?}", (0..6).map(|l| (s4.multiplicity(l), s4.eigenvalue(l))).collect::<Vec<_>>());
    Ok(())
}
