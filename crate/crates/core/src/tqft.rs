//! The special Frobenius algebras `A_n = GF(2)^n` and the linear maps they
//! assign to cobordisms.
//!
//! `A_n` has basis `e_1..e_n` with pointwise product, unit `e_1 + ... + e_n`,
//! counit `e_a ↦ 1` and coproduct `e_a ↦ e_a ⊗ e_a`. Since `μ∘Δ = 1`, every
//! connected cobordism with `r` inputs and `l` outputs is sent to the same
//! map regardless of genus: a pure tensor `e_{a_1} ⊗ .. ⊗ e_{a_r}` goes to
//! `e_a^{⊗l}` when all `a_i = a`, and to zero otherwise.
//!
//! Tensor powers are indexed mixed-radix with the leftmost factor most
//! significant; basis vectors are 0-based (`e_1` is index 0).

use crate::error::{Error, Result};
use crate::gf2::GF2Matrix;

/// Largest algebra dimension accepted by [`frobenius_check`].
pub const DEFAULT_FROBENIUS_CAP: usize = 8;

/// Largest number of entries `rows * cols` [`tensor_assemble`] will allocate.
pub const DEFAULT_TENSOR_BUDGET: u128 = 1 << 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraSpec {
    dim: usize,
}

impl AlgebraSpec {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Precondition("algebra dimension must be at least 1".into()));
        }
        Ok(AlgebraSpec { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `μ : A ⊗ A → A`.
    pub fn multiplication(&self) -> GF2Matrix {
        let d = self.dim;
        GF2Matrix::from_triplets(d, d * d, (0..d).map(|a| (a, a * d + a)))
    }

    /// `η : GF(2) → A`.
    pub fn unit(&self) -> GF2Matrix {
        GF2Matrix::from_triplets(self.dim, 1, (0..self.dim).map(|a| (a, 0)))
    }

    /// `Δ : A → A ⊗ A`, dual to the counit pairing.
    pub fn comultiplication(&self) -> GF2Matrix {
        let d = self.dim;
        GF2Matrix::from_triplets(d * d, d, (0..d).map(|a| (a * d + a, a)))
    }

    /// `ε : A → GF(2)`.
    pub fn counit(&self) -> GF2Matrix {
        GF2Matrix::from_triplets(1, self.dim, (0..self.dim).map(|a| (0, a)))
    }

    /// The flip `A ⊗ A → A ⊗ A`.
    pub fn swap(&self) -> GF2Matrix {
        let d = self.dim;
        GF2Matrix::from_triplets(
            d * d,
            d * d,
            (0..d).flat_map(|a| (0..d).map(move |b| (b * d + a, a * d + b))),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CobordismKind {
    Identity,
    Connected,
    /// A closed sphere; evaluates to the scalar `ε∘η`.
    Sphere,
}

/// A single-colored cobordism up to what a special TQFT can detect.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CobordismShape {
    pub spec: AlgebraSpec,
    pub inputs: usize,
    pub outputs: usize,
    pub kind: CobordismKind,
}

impl CobordismShape {
    pub fn new(spec: AlgebraSpec, inputs: usize, outputs: usize, kind: CobordismKind) -> Result<Self> {
        let ok = match kind {
            CobordismKind::Identity => inputs == outputs,
            CobordismKind::Connected => inputs + outputs >= 1,
            CobordismKind::Sphere => inputs == 0 && outputs == 0,
        };
        if !ok {
            return Err(Error::Precondition(format!(
                "{kind:?} cobordism cannot have {inputs} inputs and {outputs} outputs"
            )));
        }
        Ok(CobordismShape {
            spec,
            inputs,
            outputs,
            kind,
        })
    }

    pub fn to_matrix(&self) -> Result<GF2Matrix> {
        match self.kind {
            CobordismKind::Identity => {
                let d = checked_pow(self.spec.dim, self.inputs)?;
                Ok(GF2Matrix::identity(d))
            }
            CobordismKind::Connected => connected_map(self.spec, self.inputs, self.outputs),
            CobordismKind::Sphere => Ok(GF2Matrix::from_triplets(
                1,
                1,
                sphere_scalar(self.spec).then_some((0, 0)),
            )),
        }
    }
}

fn checked_pow(base: usize, exp: usize) -> Result<usize> {
    u32::try_from(exp)
        .ok()
        .and_then(|e| base.checked_pow(e))
        .ok_or_else(|| Error::size(format!("{base}^{exp}"), u128::MAX, usize::MAX as u128))
}

/// Index of `e_a^{⊗count}` in `A^{⊗count}`; the empty tensor has index 0.
pub fn constant_index(a: usize, count: usize, dim: usize) -> usize {
    (0..count).fold(0, |acc, _| acc * dim + a)
}

/// The map of a connected cobordism from `inputs` circles to `outputs`
/// circles, a `dim^outputs × dim^inputs` matrix.
pub fn connected_map(spec: AlgebraSpec, inputs: usize, outputs: usize) -> Result<GF2Matrix> {
    if inputs == 0 && outputs == 0 {
        return Err(Error::Precondition(
            "a closed connected cobordism is a sphere; use sphere_scalar".into(),
        ));
    }
    let d = spec.dim;
    let rows = checked_pow(d, outputs)?;
    let cols = checked_pow(d, inputs)?;
    Ok(GF2Matrix::from_triplets(
        rows,
        cols,
        (0..d).map(|a| (constant_index(a, outputs, d), constant_index(a, inputs, d))),
    ))
}

/// `ε(η(1))`, the value of a closed sphere.
pub fn sphere_scalar(spec: AlgebraSpec) -> bool {
    spec.dim % 2 == 1
}

/// Verifies the commutative special Frobenius algebra axioms for `A_dim`
/// as matrix identities built from the structure maps.
pub fn frobenius_check(spec: AlgebraSpec) -> Result<bool> {
    frobenius_check_capped(spec, DEFAULT_FROBENIUS_CAP)
}

pub fn frobenius_check_capped(spec: AlgebraSpec, cap: usize) -> Result<bool> {
    if spec.dim > cap {
        return Err(Error::size("Frobenius check dimension", spec.dim as u128, cap as u128));
    }
    let one = GF2Matrix::identity(spec.dim);
    let mu = spec.multiplication();
    let eta = spec.unit();
    let delta = spec.comultiplication();
    let eps = spec.counit();
    let swap = spec.swap();

    let associative = mu.mul(&mu.kron(&one)) == mu.mul(&one.kron(&mu));
    let unital = mu.mul(&eta.kron(&one)) == one && mu.mul(&one.kron(&eta)) == one;
    let coassociative = delta.kron(&one).mul(&delta) == one.kron(&delta).mul(&delta);
    let counital = eps.kron(&one).mul(&delta) == one && one.kron(&eps).mul(&delta) == one;
    let frobenius = {
        let middle = delta.mul(&mu);
        mu.kron(&one).mul(&one.kron(&delta)) == middle && one.kron(&mu).mul(&delta.kron(&one)) == middle
    };
    let commutative = mu.mul(&swap) == mu && swap.mul(&delta) == delta;
    let special = mu.mul(&delta) == one;

    Ok(associative && unital && coassociative && counital && frobenius && commutative && special)
}

/// Kronecker product of the factors in order.
pub fn tensor_assemble(factors: &[GF2Matrix]) -> Result<GF2Matrix> {
    tensor_assemble_budgeted(factors, DEFAULT_TENSOR_BUDGET)
}

pub fn tensor_assemble_budgeted(factors: &[GF2Matrix], budget: u128) -> Result<GF2Matrix> {
    let (rows, cols) = factors.iter().try_fold((1u128, 1u128), |(r, c), f| {
        Some((r.checked_mul(f.rows() as u128)?, c.checked_mul(f.cols() as u128)?))
    })
    .ok_or_else(|| Error::size("tensor product entries", u128::MAX, budget))?;
    let entries = rows.saturating_mul(cols);
    if entries > budget {
        return Err(Error::size(format!("tensor product of shape {rows}x{cols}"), entries, budget));
    }
    Ok(factors
        .iter()
        .fold(GF2Matrix::identity(1), |acc, f| acc.kron(f)))
}
