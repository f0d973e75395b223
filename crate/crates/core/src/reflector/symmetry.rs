use crate::error::{Error, Result};
use crate::pair::ReflectorPair;

/// Stretches the first reflector by `lambda` and the focal parameter by
/// `1/lambda`, with the matching affine change of the second reflector:
/// `z' = λz`, `β' = β/λ`, `w' = λw + (β/2)(λ - 1/λ)`. The ray-tracing map is
/// unchanged.
pub fn apply_scaling_symmetry(pair: &ReflectorPair, lambda: f64) -> Result<ReflectorPair> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::invalid(format!("scaling factor must be positive, got {lambda}")));
    }
    let beta = pair.beta;
    let offset = beta / 2.0 * (lambda - 1.0 / lambda);
    Ok(ReflectorPair {
        zeta: pair.zeta.iter().map(|z| lambda * z).collect(),
        omega: pair.omega.iter().map(|w| lambda * w + offset).collect(),
        beta: beta / lambda,
        ..pair.clone()
    })
}
