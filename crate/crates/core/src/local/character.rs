//! Characters of `K^x` modelled on `K^x / (1 + p_K^m)`.
//!
//! A character is its restriction to `O_K^x / (1 + p_K^m)` plus the value on a
//! fixed uniformizer: `p` for `Q_p` and the unramified extension, `theta` with
//! `theta^2 = c0 p` for the ramified ones. Conductors only see the unit part.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::field::{Elem, FieldKind, LocalFieldDesc};
use super::units::{unit_quotient, UnitQuotient};
use crate::abelian::{all_characters, GroupCharacter};
use crate::arith::{inv_mod, legendre};
use crate::error::{Error, Result};
use crate::qz::QZ;

#[derive(Debug, Clone)]
pub struct LocalCharacter {
    units: Arc<UnitQuotient>,
    unit_part: GroupCharacter,
    uniformizer_value: QZ,
}

impl PartialEq for LocalCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.field() == other.field()
            && self.level() == other.level()
            && self.unit_part.numerators() == other.unit_part.numerators()
            && self.uniformizer_value == other.uniformizer_value
    }
}

impl Eq for LocalCharacter {}

impl LocalCharacter {
    pub fn from_numerators(field: LocalFieldDesc, m: u32, numerators: Vec<u64>, uniformizer_value: QZ) -> Result<Self> {
        let units = unit_quotient(field, m)?;
        let unit_part = GroupCharacter::from_numerators(units.group().clone(), numerators)?;
        Ok(LocalCharacter { units, unit_part, uniformizer_value })
    }

    pub fn from_images(field: LocalFieldDesc, m: u32, images: &[QZ], uniformizer_value: QZ) -> Result<Self> {
        let units = unit_quotient(field, m)?;
        let unit_part = GroupCharacter::from_images(units.group().clone(), images)?;
        Ok(LocalCharacter { units, unit_part, uniformizer_value })
    }

    /// Character whose values on the unit-group generators are `f(generator)`.
    pub fn from_unit_fn(
        field: LocalFieldDesc,
        m: u32,
        uniformizer_value: QZ,
        f: impl Fn(Elem) -> QZ,
    ) -> Result<Self> {
        let units = unit_quotient(field, m)?;
        let images: Vec<QZ> = units.generator_elements().iter().map(|&g| f(g)).collect();
        Self::from_images(field, m, &images, uniformizer_value)
    }

    pub fn trivial(field: LocalFieldDesc, m: u32) -> Result<Self> {
        let units = unit_quotient(field, m)?;
        let unit_part = GroupCharacter::trivial(units.group().clone());
        Ok(LocalCharacter { units, unit_part, uniformizer_value: QZ::ZERO })
    }

    /// Every character at level `m` with the given uniformizer value.
    pub fn all_at_level(field: LocalFieldDesc, m: u32, uniformizer_value: QZ) -> Result<Vec<Self>> {
        let units = unit_quotient(field, m)?;
        Ok(all_characters(units.group())
            .into_iter()
            .map(|unit_part| LocalCharacter { units: units.clone(), unit_part, uniformizer_value })
            .collect())
    }

    pub fn field(&self) -> LocalFieldDesc {
        self.units.field()
    }

    pub fn level(&self) -> u32 {
        self.units.level()
    }

    pub fn units(&self) -> &Arc<UnitQuotient> {
        &self.units
    }

    pub fn unit_part(&self) -> &GroupCharacter {
        &self.unit_part
    }

    pub fn uniformizer_value(&self) -> QZ {
        self.uniformizer_value
    }

    pub fn with_uniformizer(&self, value: QZ) -> Self {
        LocalCharacter { uniformizer_value: value, ..self.clone() }
    }

    pub fn is_unramified(&self) -> bool {
        self.unit_part.is_trivial()
    }

    pub fn is_trivial(&self) -> bool {
        self.is_unramified() && self.uniformizer_value.is_zero()
    }

    /// Value on a unit of `O_K / p_K^m`.
    pub fn eval_unit(&self, x: Elem) -> QZ {
        self.units.pair(self.unit_part.numerators(), &self.units.dlog(x))
    }

    /// Value on `uniformizer^k * x`.
    pub fn evaluate(&self, k: i64, x: Elem) -> QZ {
        self.uniformizer_value.times(k) + self.eval_unit(x)
    }

    /// Value on a unit given by invariant-factor coordinates.
    pub fn eval_coords(&self, v: &[u64]) -> QZ {
        self.units.pair(self.unit_part.numerators(), v)
    }

    /// Conductor exponent: 0 when unramified, otherwise the least `i >= 1`
    /// with the character trivial on `1 + p_K^i`.
    pub fn conductor(&self) -> u32 {
        if self.is_unramified() {
            return 0;
        }
        let nums = self.unit_part.numerators();
        // Deepest level carrying a non-trivial raw generator value.
        let deepest = self
            .units
            .raw_levels()
            .iter()
            .zip(self.units.raw_coords())
            .filter(|(_, c)| !self.units.pair(nums, c).is_zero())
            .map(|(&l, _)| l)
            .max()
            .unwrap_or(0);
        deepest + 1
    }

    fn check_same_field(&self, other: &Self) -> Result<()> {
        if self.field() != other.field() {
            return Err(Error::MismatchedGroups);
        }
        Ok(())
    }

    /// Brings both characters to a common level.
    fn aligned(&self, other: &Self) -> Result<(LocalCharacter, LocalCharacter)> {
        self.check_same_field(other)?;
        let m = self.level().max(other.level());
        Ok((self.at_level(m)?, other.at_level(m)?))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.aligned(other)?;
        Ok(LocalCharacter {
            unit_part: a.unit_part.mul(&b.unit_part)?,
            uniformizer_value: a.uniformizer_value + b.uniformizer_value,
            units: a.units,
        })
    }

    pub fn pow(&self, n: i64) -> Self {
        LocalCharacter {
            units: self.units.clone(),
            unit_part: self.unit_part.pow(n),
            uniformizer_value: self.uniformizer_value.times(n),
        }
    }

    pub fn inverse(&self) -> Self {
        self.pow(-1)
    }

    /// Equality as characters of `K^x`, regardless of the stored levels.
    pub fn same_as(&self, other: &Self) -> bool {
        match self.aligned(other) {
            Ok((a, b)) => a == b,
            Err(_) => false,
        }
    }

    /// The same character on `K^x / (1 + p_K^{m'})`. Lowering the level needs
    /// `m' >= c(chi)`.
    pub fn at_level(&self, m: u32) -> Result<Self> {
        if m == self.level() {
            return Ok(self.clone());
        }
        if m < self.level() {
            let c = self.conductor();
            if c > m {
                return Err(Error::LevelBelowConductor { requested: m, conductor: c });
            }
        }
        let target = unit_quotient(self.field(), m)?;
        let own = self.units.ring;
        let images: Vec<QZ> = target.generator_elements().iter().map(|&g| self.eval_unit(own.reduce(g))).collect();
        let unit_part = GroupCharacter::from_images(target.group().clone(), &images)?;
        Ok(LocalCharacter { units: target, unit_part, uniformizer_value: self.uniformizer_value })
    }

    /// Lowest level at which the character can be stored.
    pub fn minimal(&self) -> Self {
        self.at_level(self.conductor().max(1)).expect("conductor level is always reachable")
    }

    /// `eta^sigma = eta o sigma` for the non-trivial automorphism of `K / Q_p`.
    pub fn galois_conjugate(&self) -> Result<Self> {
        let field = self.field();
        if !field.is_quadratic() {
            return Err(Error::NotQuadratic);
        }
        let images: Vec<QZ> = self.units.sigma_coords().iter().map(|v| self.eval_coords(v)).collect();
        let unit_part = GroupCharacter::from_images(self.units.group().clone(), &images)?;
        let uniformizer_value = if field.is_ramified() {
            // sigma(theta) = -theta
            self.uniformizer_value + self.eval_unit(self.units.ring.int(-1))
        } else {
            self.uniformizer_value
        };
        Ok(LocalCharacter { units: self.units.clone(), unit_part, uniformizer_value })
    }

    /// Restriction to `Q_p^x`, at level `ceil(m / e)`.
    pub fn restrict_to_base(&self) -> Result<Self> {
        let field = self.field();
        if !field.is_quadratic() {
            return Err(Error::NotQuadratic);
        }
        let base = field.base_field();
        let ring = self.units.ring;
        let uniformizer_value = if field.is_ramified() {
            // p = theta^2 / c0
            let c0_inv = inv_mod(field.c0(), ring.mod_a).unwrap();
            self.uniformizer_value.times(2) + self.eval_unit(ring.int(c0_inv as i64))
        } else {
            self.uniformizer_value
        };
        LocalCharacter::from_unit_fn(base, field.base_level(self.level()), uniformizer_value, |g| {
            self.eval_unit(ring.reduce(g))
        })
    }

    pub fn record(&self) -> LocalCharacterRecord {
        LocalCharacterRecord {
            p: self.field().p,
            kind: self.field().kind,
            m: self.level(),
            images: self.unit_part.images().iter().map(QZ::to_string).collect(),
            uniformizer_value: self.uniformizer_value,
        }
    }
}

/// `(p, kind, m, generator images, uniformizer value)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalCharacterRecord {
    pub p: u64,
    pub kind: FieldKind,
    pub m: u32,
    pub images: Vec<String>,
    pub uniformizer_value: QZ,
}

impl LocalCharacterRecord {
    pub fn to_character(&self) -> Result<LocalCharacter> {
        let images = self
            .images
            .iter()
            .map(|s| s.parse::<QZ>().map_err(|e| Error::InvalidInput(e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        LocalCharacter::from_images(LocalFieldDesc::new(self.p, self.kind)?, self.m, &images, self.uniformizer_value)
    }
}

/// The character of `Q_p^x` cutting out `N_{K/Q_p}(K^x)`.
/// Parses `field=unram;level=2;images=1/5,1/3;unif=0`.
///
/// Every key is optional: the field defaults to `Q_p`, the level to 1, the unit
/// part to trivial and the uniformizer value to 0.
pub fn parse_character(p: u64, spec: &str) -> Result<LocalCharacter> {
    let mut kind = FieldKind::Base;
    let mut m = 1u32;
    let mut images: Option<Vec<QZ>> = None;
    let mut unif = QZ::ZERO;
    let bad = |what: &str| Error::InvalidInput(format!("bad {what} in character spec `{spec}`"));
    for part in spec.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let (key, value) = part.split_once('=').ok_or_else(|| bad("entry"))?;
        let value = value.trim();
        match key.trim() {
            "field" | "kind" => kind = value.parse()?,
            "level" | "m" => m = value.parse().map_err(|_| bad("level"))?,
            "images" => {
                images = Some(
                    value
                        .split(',')
                        .filter(|s| !s.trim().is_empty())
                        .map(|s| s.parse::<QZ>().map_err(|_| bad("image")))
                        .collect::<Result<_>>()?,
                )
            }
            "unif" | "uniformizer" => unif = value.parse().map_err(|_| bad("uniformizer value"))?,
            other => return Err(Error::InvalidInput(format!("unknown key `{other}` in character spec"))),
        }
    }
    let field = LocalFieldDesc::new(p, kind)?;
    match images {
        Some(images) => LocalCharacter::from_images(field, m, &images, unif),
        None => Ok(LocalCharacter::trivial(field, m)?.with_uniformizer(unif)),
    }
}

pub fn quadratic_character(field: LocalFieldDesc) -> Result<LocalCharacter> {
    if !field.is_quadratic() {
        return Err(Error::NotQuadratic);
    }
    let base = field.base_field();
    let p = field.p;
    if !field.is_ramified() {
        return Ok(LocalCharacter::trivial(base, 1)?.with_uniformizer(QZ::HALF));
    }
    // N(theta) = -c0 p is a norm, so w(p) = w(-c0).
    let unif = if legendre(-(field.c0() as i64), p) == 1 { QZ::ZERO } else { QZ::HALF };
    LocalCharacter::from_unit_fn(base, 1, unif, |g| if legendre(g.0 as i64, p) == 1 { QZ::ZERO } else { QZ::HALF })
}

/// `f c(chi o N) = c(chi) + c(chi w) - c(w)`, with the left side computed by filtration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormCertificate {
    pub f: u32,
    pub c_chi: u32,
    pub c_chi_omega: u32,
    pub c_omega: u32,
    pub c_composite: u32,
    pub level: u32,
}

impl NormCertificate {
    pub fn holds(&self) -> bool {
        self.f * self.c_composite + self.c_omega == self.c_chi + self.c_chi_omega
    }
}

/// Level of `K^x` at which `chi o N` is faithfully modelled.
fn norm_level(field: LocalFieldDesc, c: u32) -> u32 {
    if field.is_ramified() {
        (2 * c).saturating_sub(1).max(1)
    } else {
        c.max(1)
    }
}

/// `chi o N_{K/Q_p}` for a character `chi` of `Q_p^x`.
pub fn norm_compose(chi: &LocalCharacter, field: LocalFieldDesc) -> Result<(LocalCharacter, NormCertificate)> {
    if chi.field().is_quadratic() {
        return Err(Error::NotBaseField);
    }
    if !field.is_quadratic() || field.p != chi.field().p {
        return Err(Error::NotQuadratic);
    }
    let c = chi.conductor();
    // One level of slack so the filtration test can see a conductor beyond the expected one.
    let level = norm_level(field, c) + 1;
    let composite = norm_compose_at(chi, field, level)?;
    let omega = quadratic_character(field)?;
    let cert = NormCertificate {
        f: field.f(),
        c_chi: c,
        c_chi_omega: chi.mul(&omega)?.conductor(),
        c_omega: omega.conductor(),
        c_composite: composite.conductor(),
        level,
    };
    if !cert.holds() {
        return Err(Error::InvariantViolation(format!("norm conductor identity fails: {cert:?}")));
    }
    Ok((composite, cert))
}

/// `chi o N` stored at level `m` of `K`.
pub fn norm_compose_at(chi: &LocalCharacter, field: LocalFieldDesc, m: u32) -> Result<LocalCharacter> {
    let units = unit_quotient(field, m)?;
    let ring = units.ring;
    let base_level = field.base_level(m);
    let c = chi.conductor();
    if c > base_level {
        return Err(Error::LevelBelowConductor { requested: base_level, conductor: c });
    }
    let chi_b = chi.at_level(base_level)?;
    let base_ring = chi_b.units.ring;
    let uniformizer_value = if field.is_ramified() {
        // N(theta) = -c0 p
        chi.uniformizer_value + chi_b.eval_unit(base_ring.int(-(field.c0() as i64)))
    } else {
        chi.uniformizer_value.times(2)
    };
    let images: Vec<QZ> =
        units.generator_elements().iter().map(|&g| chi_b.eval_unit(base_ring.int(ring.norm(g) as i64))).collect();
    let unit_part = GroupCharacter::from_images(units.group().clone(), &images)?;
    Ok(LocalCharacter { units, unit_part, uniformizer_value })
}

/// `c(chi1 chi2) <= max(c(chi1), c(chi2))`, with equality when the two differ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductBound {
    pub c1: u32,
    pub c2: u32,
    pub c_product: u32,
}

pub fn char_product_conductor_bound(chi1: &LocalCharacter, chi2: &LocalCharacter) -> Result<ProductBound> {
    let prod = chi1.mul(chi2)?;
    let b = ProductBound { c1: chi1.conductor(), c2: chi2.conductor(), c_product: prod.conductor() };
    let ok = b.c_product <= b.c1.max(b.c2) && (b.c1 == b.c2 || b.c_product == b.c1.max(b.c2));
    if !ok {
        return Err(Error::InvariantViolation(format!("product conductor bound fails: {b:?}")));
    }
    Ok(b)
}
