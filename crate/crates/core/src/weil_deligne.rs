//! GL(2) local parameters at an odd prime and their symmetric powers.

use serde::Serialize;

use crate::arith::ipow;
use crate::error::{Error, Result};
use crate::local::{
    norm_compose, norm_compose_at, quadratic_character, unit_quotient, LocalCharacter, LocalCharacterRecord,
    LocalFieldDesc,
};
use crate::qz::QZ;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    PrincipalSeries,
    Special,
    Supercuspidal,
}

impl Variant {
    pub fn tag(self) -> &'static str {
        match self {
            Variant::PrincipalSeries => "ps",
            Variant::Special => "sp",
            Variant::Supercuspidal => "sc",
        }
    }
}

/// `(phi, N)` for the three kinds of GL(2) parameters. The monodromy operator is
/// zero for principal series and supercuspidals and rank one for special ones.
#[derive(Debug, Clone)]
pub enum WeilDeligneParam {
    PrincipalSeries { mu1: LocalCharacter, mu2: LocalCharacter },
    Special { mu: LocalCharacter },
    /// `Ind_{W_K}^{W_{Q_p}} eta`.
    Supercuspidal { field: LocalFieldDesc, eta: LocalCharacter },
}

fn require_base(chi: &LocalCharacter) -> Result<()> {
    if chi.field().is_quadratic() {
        Err(Error::NotBaseField)
    } else {
        Ok(())
    }
}

impl WeilDeligneParam {
    pub fn principal_series(mu1: LocalCharacter, mu2: LocalCharacter) -> Result<Self> {
        require_base(&mu1)?;
        require_base(&mu2)?;
        if mu1.field() != mu2.field() {
            return Err(Error::MismatchedGroups);
        }
        Ok(WeilDeligneParam::PrincipalSeries { mu1, mu2 })
    }

    pub fn special(mu: LocalCharacter) -> Result<Self> {
        require_base(&mu)?;
        Ok(WeilDeligneParam::Special { mu })
    }

    /// Rejects `eta = eta^sigma`, for which the induced parameter is reducible.
    pub fn supercuspidal(eta: LocalCharacter) -> Result<Self> {
        let field = eta.field();
        if !field.is_quadratic() {
            return Err(Error::NotQuadratic);
        }
        if eta.galois_conjugate()? == eta {
            return Err(Error::ReducibleInduction);
        }
        Ok(WeilDeligneParam::Supercuspidal { field, eta })
    }

    pub fn variant(&self) -> Variant {
        match self {
            WeilDeligneParam::PrincipalSeries { .. } => Variant::PrincipalSeries,
            WeilDeligneParam::Special { .. } => Variant::Special,
            WeilDeligneParam::Supercuspidal { .. } => Variant::Supercuspidal,
        }
    }

    pub fn p(&self) -> u64 {
        match self {
            WeilDeligneParam::PrincipalSeries { mu1, .. } => mu1.field().p,
            WeilDeligneParam::Special { mu } => mu.field().p,
            WeilDeligneParam::Supercuspidal { field, .. } => field.p,
        }
    }

    /// Conductor exponent of the parameter (at least 1 for principal series, by the
    /// census convention).
    pub fn conductor(&self) -> u32 {
        match self {
            WeilDeligneParam::PrincipalSeries { mu1, mu2 } => (mu1.conductor() + mu2.conductor()).max(1),
            WeilDeligneParam::Special { mu } => (2 * mu.conductor()).max(1),
            WeilDeligneParam::Supercuspidal { field, eta } => {
                if field.is_ramified() {
                    1 + eta.conductor()
                } else {
                    2 * eta.conductor()
                }
            }
        }
    }

    /// `c(mu1) + c(mu2)`, `2 c(mu)` or the supercuspidal conductor, without the floor at 1.
    fn raw_conductor(&self) -> u32 {
        match self {
            WeilDeligneParam::PrincipalSeries { mu1, mu2 } => mu1.conductor() + mu2.conductor(),
            WeilDeligneParam::Special { mu } => (2 * mu.conductor()).max(1),
            WeilDeligneParam::Supercuspidal { .. } => self.conductor(),
        }
    }
}

/// `eta|_{Q_p^x} * w_{K/Q_p}`.
pub fn central_character(pi: &WeilDeligneParam) -> Result<LocalCharacter> {
    let WeilDeligneParam::Supercuspidal { field, eta } = pi else {
        return Err(Error::NotQuadratic);
    };
    eta.restrict_to_base()?.mul(&quadratic_character(*field)?)
}

/// Witness for `eta^sigma eta = w_p o N`.
#[derive(Debug, Clone)]
pub struct CentralCertificate {
    /// `w_p' = w_p o N_{K/Q_p}` at the level of `eta`.
    pub omega_prime: LocalCharacter,
}

pub fn check_central_identity(pi: &WeilDeligneParam, omega_p: &LocalCharacter) -> Result<CentralCertificate> {
    let WeilDeligneParam::Supercuspidal { field, eta } = pi else {
        return Err(Error::NotQuadratic);
    };
    if !omega_p.same_as(&central_character(pi)?) {
        return Err(Error::InvalidInput("supplied character is not the central character".into()));
    }
    let omega_prime = norm_compose_at(omega_p, *field, eta.level())?;
    let lhs = eta.galois_conjugate()?.mul(eta)?;
    if lhs != omega_prime {
        return Err(Error::InvariantViolation("eta^sigma * eta differs from w_p o N".into()));
    }
    Ok(CentralCertificate { omega_prime })
}

/// `w_p' = eta eta^sigma`, checked against `w_p o N`.
fn omega_prime(pi: &WeilDeligneParam) -> Result<LocalCharacter> {
    Ok(check_central_identity(pi, &central_character(pi)?)?.omega_prime)
}

#[derive(Debug, Clone)]
pub enum Summand {
    /// `Ind(xi)`, `xi = eta^a (eta^sigma)^b`; when `xi = xi^sigma` it splits as
    /// `phi + phi w_{K/Q_p}` with `phi o N = xi`.
    Induced { a: u32, b: u32, xi: LocalCharacter, reducible: bool, factor: Option<LocalCharacter> },
    /// The one-dimensional summand of even symmetric powers of a supercuspidal.
    OneDim { chi0: LocalCharacter, alternative: LocalCharacter },
    /// `mu1^i mu2^{n-i}`.
    Character { i: u32, nu: LocalCharacter },
    /// `mu^n` tensored with the `(n+1)`-dimensional Steinberg block.
    SpecialBlock { mu_n: LocalCharacter, monodromy_rank: u32 },
}

impl Summand {
    pub fn dim(&self) -> u32 {
        match self {
            Summand::Induced { .. } => 2,
            Summand::OneDim { .. } | Summand::Character { .. } => 1,
            Summand::SpecialBlock { monodromy_rank, .. } => monodromy_rank + 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SymDecomposition {
    pub n: u32,
    pub summands: Vec<Summand>,
    pub total_dim: u32,
}

pub fn sym_decompose(pi: &WeilDeligneParam, n: u32) -> Result<SymDecomposition> {
    if n == 0 {
        return Err(Error::InvalidInput("symmetric power degree must be at least 1".into()));
    }
    let summands = match pi {
        WeilDeligneParam::PrincipalSeries { mu1, mu2 } => (0..=n)
            .map(|i| Ok(Summand::Character { i, nu: mu1.pow(i as i64).mul(&mu2.pow((n - i) as i64))? }))
            .collect::<Result<Vec<_>>>()?,
        WeilDeligneParam::Special { mu } => vec![Summand::SpecialBlock { mu_n: mu.pow(n as i64), monodromy_rank: n }],
        WeilDeligneParam::Supercuspidal { field, eta } => {
            let eta_s = eta.galois_conjugate()?;
            let mut out = Vec::new();
            for i in 0..n.div_ceil(2) {
                let (a, b) = (n - i, i);
                let xi = eta.pow(a as i64).mul(&eta_s.pow(b as i64))?;
                let reducible = xi.galois_conjugate()? == xi;
                let criterion = irreducibility_criterion(pi, a, b)?;
                if criterion == reducible {
                    return Err(Error::InvariantViolation(format!(
                        "irreducibility criterion disagrees with xi vs xi^sigma at ({a},{b})"
                    )));
                }
                let factor = if reducible { Some(solve_norm_factorization(&xi, *field)?) } else { None };
                out.push(Summand::Induced { a, b, xi, reducible, factor });
            }
            if n % 2 == 0 {
                let (chi0, alternative) = one_dim_summand(pi, n)?;
                out.push(Summand::OneDim { chi0, alternative });
            }
            out
        }
    };
    let total_dim = summands.iter().map(Summand::dim).sum();
    if total_dim != n + 1 {
        return Err(Error::InvariantViolation(format!("sym^{n} decomposed into dimension {total_dim}")));
    }
    Ok(SymDecomposition { n, summands, total_dim })
}

/// `(eta|_{Q_p^x})^{n/2}` and its twist by `w_{K/Q_p}`. The first restricts to
/// `(eta eta^sigma)^{n/2}` on `K^x` and matches the action of `sigma^2` on the
/// symmetric tensor; the second is recorded for comparison.
fn one_dim_summand(pi: &WeilDeligneParam, n: u32) -> Result<(LocalCharacter, LocalCharacter)> {
    let WeilDeligneParam::Supercuspidal { field, eta } = pi else { unreachable!() };
    let half = (n / 2) as i64;
    let chi0 = eta.restrict_to_base()?.pow(half);
    let target = eta.mul(&eta.galois_conjugate()?)?.pow(half);
    let pulled = norm_compose_at(&chi0, *field, eta.level())?;
    if pulled != target {
        return Err(Error::InvariantViolation("one-dimensional summand does not restrict to (eta eta^sigma)^{n/2}".into()));
    }
    let alternative = chi0.mul(&quadratic_character(*field)?)?;
    Ok((chi0, alternative))
}

fn supercuspidal_eta(pi: &WeilDeligneParam) -> Result<&LocalCharacter> {
    match pi {
        WeilDeligneParam::Supercuspidal { eta, .. } => Ok(eta),
        _ => Err(Error::NotQuadratic),
    }
}

/// Irreducibility of `Ind(eta^i (eta^sigma)^j)` through `eta^{2(i-j)} != w_p'^{i-j}`.
pub fn irreducibility_criterion(pi: &WeilDeligneParam, i: u32, j: u32) -> Result<bool> {
    let eta = supercuspidal_eta(pi)?;
    let w = omega_prime(pi)?;
    let d = i as i64 - j as i64;
    Ok(eta.pow(2 * d) != w.pow(d))
}

/// Direct test: `xi != xi^sigma` for `xi = eta^i (eta^sigma)^j`.
pub fn irreducibility_direct(pi: &WeilDeligneParam, i: u32, j: u32) -> Result<bool> {
    let eta = supercuspidal_eta(pi)?;
    let xi = eta.pow(i as i64).mul(&eta.galois_conjugate()?.pow(j as i64))?;
    Ok(xi.galois_conjugate()? != xi)
}

/// Both tests, required to agree.
pub fn is_irreducible_summand(pi: &WeilDeligneParam, i: u32, j: u32) -> Result<bool> {
    let c = irreducibility_criterion(pi, i, j)?;
    if c != irreducibility_direct(pi, i, j)? {
        return Err(Error::InvariantViolation(format!("irreducibility tests disagree at ({i},{j})")));
    }
    Ok(c)
}

/// `Ind(xi_{ij}) = Ind(xi_{kl})` through `eta^{2(i+k-n)} = w'^{i+k-n}` or `eta^{2(i-k)} = w'^{i-k}`.
pub fn isomorphism_criterion(pi: &WeilDeligneParam, (i, j): (u32, u32), (k, l): (u32, u32)) -> Result<bool> {
    if i + j != k + l {
        return Err(Error::InvalidInput("summands come from different symmetric powers".into()));
    }
    let eta = supercuspidal_eta(pi)?;
    let w = omega_prime(pi)?;
    let n = (i + j) as i64;
    let d1 = i as i64 + k as i64 - n;
    let d2 = i as i64 - k as i64;
    Ok(eta.pow(2 * d1) == w.pow(d1) || eta.pow(2 * d2) == w.pow(d2))
}

/// Direct test: `{xi, xi^sigma} = {zeta, zeta^sigma}`.
pub fn isomorphism_direct(pi: &WeilDeligneParam, (i, j): (u32, u32), (k, l): (u32, u32)) -> Result<bool> {
    let eta = supercuspidal_eta(pi)?;
    let eta_s = eta.galois_conjugate()?;
    let xi = eta.pow(i as i64).mul(&eta_s.pow(j as i64))?;
    let zeta = eta.pow(k as i64).mul(&eta_s.pow(l as i64))?;
    Ok(zeta == xi || zeta == xi.galois_conjugate()?)
}

pub fn are_isomorphic_summands(pi: &WeilDeligneParam, ij: (u32, u32), kl: (u32, u32)) -> Result<bool> {
    let c = isomorphism_criterion(pi, ij, kl)?;
    if c != isomorphism_direct(pi, ij, kl)? {
        return Err(Error::InvariantViolation(format!("isomorphism tests disagree at {ij:?}, {kl:?}")));
    }
    Ok(c)
}

/// All `phi` on `Q_p^x` with `phi o N_{K/Q_p} = xi`.
pub fn norm_factorizations(xi: &LocalCharacter, field: LocalFieldDesc) -> Result<Vec<LocalCharacter>> {
    if xi.field() != field || !field.is_quadratic() {
        return Err(Error::NotQuadratic);
    }
    let c = xi.conductor();
    let base = field.base_field();
    let level = c.div_ceil(field.e()).max(1);
    let m = c.max(field.e() * (level - 1) + 1);
    let xi = xi.at_level(m)?;
    let kq = unit_quotient(field, m)?;
    let bq = unit_quotient(base, level)?;
    let ring = kq.ring;
    let norm_coords: Vec<Vec<u64>> =
        kq.generator_elements().iter().map(|&g| bq.dlog(bq.ring.int(ring.norm(g) as i64))).collect();
    let minus_c0 = bq.dlog(bq.ring.int(-(field.c0() as i64)));
    let xi_images: Vec<QZ> = (0..kq.group().rank()).map(|j| xi.unit_part().images()[j]).collect();

    let mut out = Vec::new();
    for psi in LocalCharacter::all_at_level(base, level, QZ::ZERO)? {
        let nums = psi.unit_part().numerators();
        if norm_coords.iter().zip(&xi_images).any(|(v, &x)| bq.pair(nums, v) != x) {
            continue;
        }
        if field.is_ramified() {
            let u = xi.uniformizer_value() - bq.pair(nums, &minus_c0);
            out.push(psi.with_uniformizer(u));
        } else {
            for u in xi.uniformizer_value().divide(2) {
                out.push(psi.with_uniformizer(u));
            }
        }
    }
    Ok(out)
}

/// The factorization of a `sigma`-invariant `xi` through the norm with the smaller
/// conductor; ties go to the lexicographically smaller generator images.
pub fn solve_norm_factorization(xi: &LocalCharacter, field: LocalFieldDesc) -> Result<LocalCharacter> {
    let mut sols = norm_factorizations(xi, field)?;
    if sols.is_empty() {
        return Err(Error::NoNormFactorization);
    }
    if sols.len() != 2 {
        return Err(Error::InvariantViolation(format!("expected two norm factorizations, found {}", sols.len())));
    }
    sols.sort_by_key(|phi| (phi.conductor(), phi.unit_part().numerators().to_vec(), phi.uniformizer_value()));
    Ok(sols.swap_remove(0))
}

#[derive(Debug, Clone, Serialize)]
pub struct SummandRecord {
    pub kind: &'static str,
    /// Exponents `(a, b)` of `eta^a (eta^sigma)^b`, or `(i, n-i)` for principal series.
    pub exponents: Option<(u32, u32)>,
    pub dim: u32,
    pub conductor: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factor_conductors: Option<(u32, u32)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alternative_conductor: Option<u32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SymConductorCertificate {
    pub p: u64,
    pub variant: Variant,
    pub c_pi: u32,
    pub n: u32,
    pub c_sym: u32,
    /// `(n + 2) c(pi)`.
    pub bound: u32,
    pub lower_bound_holds: bool,
    /// `n c(phi)` for principal series.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ps_bound: Option<u32>,
    /// The closed form `n` or `(n+1) c(mu^n)` for special parameters, taken literally.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub special_closed_form: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_eta_sigma: Option<u32>,
    pub summands: Vec<SummandRecord>,
}

/// Conductor exponent of `sym^n` of the parameter, with the bound `c <= (n+2) c(pi)`.
pub fn sym_conductor(pi: &WeilDeligneParam, n: u32) -> Result<SymConductorCertificate> {
    if pi.raw_conductor() == 0 {
        return Err(Error::Unramified);
    }
    let dec = sym_decompose(pi, n)?;
    let c_pi = pi.conductor();
    let mut records = Vec::with_capacity(dec.summands.len());
    let mut ps_bound = None;
    let mut special_closed_form = None;
    let mut c_eta_sigma = None;
    let total: u32 = match pi {
        WeilDeligneParam::PrincipalSeries { .. } => {
            let mut sum = 0;
            for s in &dec.summands {
                let Summand::Character { i, nu } = s else { unreachable!() };
                let c = nu.conductor();
                sum += c;
                records.push(SummandRecord {
                    kind: "character",
                    exponents: Some((*i, n - i)),
                    dim: 1,
                    conductor: c,
                    factor_conductors: None,
                    alternative_conductor: None,
                });
            }
            let bound = n * pi.raw_conductor();
            ps_bound = Some(bound);
            if sum > bound {
                return Err(Error::BoundViolation { n, value: sum, bound });
            }
            sum
        }
        WeilDeligneParam::Special { mu } => {
            let Summand::SpecialBlock { mu_n, .. } = &dec.summands[0] else { unreachable!() };
            let c_mu_n = mu_n.conductor();
            let literal = if mu.is_unramified() { n } else { (n + 1) * c_mu_n };
            special_closed_form = Some(literal);
            // mu^n St_{n+1}: the monodromy contributes n exactly when mu^n is unramified.
            let value = if c_mu_n == 0 { n } else { (n + 1) * c_mu_n };
            records.push(SummandRecord {
                kind: "special_block",
                exponents: None,
                dim: n + 1,
                conductor: value,
                factor_conductors: None,
                alternative_conductor: None,
            });
            value
        }
        WeilDeligneParam::Supercuspidal { field, eta } => {
            let omega = quadratic_character(*field)?;
            let eta_s_c = eta.galois_conjugate()?.conductor();
            let limit = if field.is_ramified() { 2 * c_pi } else { c_pi };
            if eta_s_c > limit {
                return Err(Error::InvariantViolation(format!("c(eta^sigma) = {eta_s_c} exceeds {limit}")));
            }
            c_eta_sigma = Some(eta_s_c);
            let mut sum = 0;
            for s in &dec.summands {
                let rec = match s {
                    Summand::Induced { a, b, xi, reducible, factor } => {
                        let ind = field.disc_val() + field.f() * xi.conductor();
                        if *reducible {
                            let phi = factor.as_ref().expect("reducible summands carry a factor");
                            let split = (phi.conductor(), phi.mul(&omega)?.conductor());
                            if split.0 + split.1 != ind {
                                return Err(Error::InvariantViolation(format!(
                                    "split conductor {split:?} differs from induced conductor {ind}"
                                )));
                            }
                            SummandRecord {
                                kind: "induced_reducible",
                                exponents: Some((*a, *b)),
                                dim: 2,
                                conductor: split.0 + split.1,
                                factor_conductors: Some(split),
                                alternative_conductor: None,
                            }
                        } else {
                            SummandRecord {
                                kind: "induced",
                                exponents: Some((*a, *b)),
                                dim: 2,
                                conductor: ind,
                                factor_conductors: None,
                                alternative_conductor: None,
                            }
                        }
                    }
                    Summand::OneDim { chi0, alternative } => SummandRecord {
                        kind: "one_dim",
                        exponents: Some((n / 2, n / 2)),
                        dim: 1,
                        conductor: chi0.conductor(),
                        factor_conductors: None,
                        alternative_conductor: Some(alternative.conductor()),
                    },
                    _ => unreachable!(),
                };
                sum += rec.conductor;
                records.push(rec);
            }
            sum
        }
    };
    let bound = (n + 2) * c_pi;
    if total > bound {
        return Err(Error::BoundViolation { n, value: total, bound });
    }
    Ok(SymConductorCertificate {
        p: pi.p(),
        variant: pi.variant(),
        c_pi,
        n,
        c_sym: total,
        bound,
        lower_bound_holds: total >= 1,
        ps_bound,
        special_closed_form,
        c_eta_sigma,
        summands: records,
    })
}

/// Parameter description for serialized output.
#[derive(Debug, Clone, Serialize)]
pub struct ParamRecord {
    pub variant: Variant,
    pub characters: Vec<LocalCharacterRecord>,
}

impl WeilDeligneParam {
    pub fn record(&self) -> ParamRecord {
        let characters = match self {
            WeilDeligneParam::PrincipalSeries { mu1, mu2 } => vec![mu1.record(), mu2.record()],
            WeilDeligneParam::Special { mu } => vec![mu.record()],
            WeilDeligneParam::Supercuspidal { eta, .. } => vec![eta.record()],
        };
        ParamRecord { variant: self.variant(), characters }
    }
}

/// Level exponents a conductor-`l` local component can map to under `sym^n`.
pub fn propagated_levels(l: u32, n: u32) -> std::ops::RangeInclusive<u32> {
    1..=(n + 2) * l
}

/// `p^{c}`, the level a conductor exponent corresponds to.
pub fn level_of(p: u64, c: u32) -> u64 {
    ipow(p, c)
}

/// Checks the norm identity for a character and returns the pulled-back character.
pub fn pull_back(chi: &LocalCharacter, field: LocalFieldDesc) -> Result<LocalCharacter> {
    Ok(norm_compose(chi, field)?.0)
}
