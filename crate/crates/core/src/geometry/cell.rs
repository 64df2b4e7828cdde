use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{GeometryError, SpatialDomain};
use crate::dsl::{evaluate, EvalContext, EvalError, Expr, Var};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellKind {
    /// Points with `f(x, y, z; t) <= iso`.
    ImplicitRegion,
    /// The surface `z = g(x, y; t)`.
    HeightField,
}

/// Value assigned at an isolated point where the expression itself is undefined but
/// has a limit, e.g. `(x²+y²)·sin(1/√(x²+y²))` at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointLimit<T> {
    pub x: T,
    pub y: T,
    #[serde(default)]
    pub z: T,
    pub value: T,
}

/// A cell definition: field expression, how to read it, where it lives and its parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSpec<T> {
    kind: CellKind,
    expr: Expr,
    domain: SpatialDomain<T>,
    params: BTreeMap<String, T>,
    iso: T,
    limits: Vec<PointLimit<T>>,
}

/// Outcome of a membership query. `diagnostic` carries the evaluation failure, if any,
/// that made the point a non-member.
#[derive(Debug, Clone, PartialEq)]
pub struct Membership {
    pub inside: bool,
    pub diagnostic: Option<EvalError>,
}

impl<T: Real> CellSpec<T> {
    pub fn new(
        kind: CellKind,
        expr: Expr,
        domain: SpatialDomain<T>,
        params: BTreeMap<String, T>,
    ) -> Result<Self, GeometryError> {
        domain.validate()?;
        if kind == CellKind::HeightField && expr.uses_var(Var::Z) {
            return Err(GeometryError::HeightFieldUsesZ);
        }
        if let Some(missing) = expr.free_params().into_iter().find(|p| !params.contains_key(p)) {
            return Err(GeometryError::Eval(EvalError::UnboundParam(missing)));
        }
        Ok(CellSpec {
            kind,
            expr,
            domain,
            params,
            iso: T::one(),
            limits: Vec::new(),
        })
    }

    pub fn implicit(expr: Expr, domain: SpatialDomain<T>) -> Result<Self, GeometryError> {
        Self::new(CellKind::ImplicitRegion, expr, domain, BTreeMap::new())
    }

    pub fn height_field(expr: Expr, domain: SpatialDomain<T>) -> Result<Self, GeometryError> {
        Self::new(CellKind::HeightField, expr, domain, BTreeMap::new())
    }

    pub fn with_iso(mut self, iso: T) -> Self {
        self.iso = iso;
        self
    }

    pub fn with_limit(mut self, limit: PointLimit<T>) -> Self {
        self.limits.push(limit);
        self
    }

    pub fn kind(&self) -> CellKind {
        self.kind
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn domain(&self) -> &SpatialDomain<T> {
        &self.domain
    }

    pub fn params(&self) -> &BTreeMap<String, T> {
        &self.params
    }

    pub fn iso(&self) -> T {
        self.iso
    }

    pub fn limits(&self) -> &[PointLimit<T>] {
        &self.limits
    }

    pub fn uses_time(&self) -> bool {
        self.expr.uses_var(Var::T)
    }

    pub(crate) fn check_time(&self, t: T) -> Result<(), GeometryError> {
        if self.uses_time() && !(t > T::zero()) {
            return Err(GeometryError::TimeNotPositive(t.to_f64_lossy()));
        }
        Ok(())
    }

    pub(crate) fn context(&self, t: T) -> EvalContext<T> {
        EvalContext::new(T::zero(), T::zero(), T::zero(), t).with_params(self.params.clone())
    }

    /// Field value at the context's point, falling back to a declared limit where the
    /// expression is undefined.
    pub fn field_at(&self, ctx: &EvalContext<T>) -> Result<T, EvalError> {
        match evaluate(&self.expr, ctx) {
            Err(EvalError::Domain(kind)) => self
                .limits
                .iter()
                .find(|l| l.x == ctx.x && l.y == ctx.y && (self.kind == CellKind::HeightField || l.z == ctx.z))
                .map(|l| l.value)
                .ok_or(EvalError::Domain(kind)),
            other => other,
        }
    }

    /// Whether `point` belongs to the cell at time `t`.
    ///
    /// Implicit regions: inside the domain and `f <= iso` (the boundary counts).
    /// Height fields: inside the planar domain and on or below the surface, `z <= g(x, y; t)`.
    pub fn membership(&self, point: [T; 3], t: T) -> Result<Membership, GeometryError> {
        self.check_time(t)?;
        let [x, y, z] = point;
        if !self.domain.contains(x, y, z) {
            return Ok(Membership {
                inside: false,
                diagnostic: None,
            });
        }
        let mut ctx = self.context(t);
        ctx.x = x;
        ctx.y = y;
        ctx.z = z;
        let inside = |v: T| match self.kind {
            CellKind::ImplicitRegion => v <= self.iso,
            CellKind::HeightField => z <= v,
        };
        match self.field_at(&ctx) {
            Ok(v) => Ok(Membership {
                inside: inside(v),
                diagnostic: None,
            }),
            Err(e @ EvalError::Domain(_)) => Ok(Membership {
                inside: false,
                diagnostic: Some(e),
            }),
            Err(e) => Err(e.into()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{parse_str, DomainKind};

    fn ball() -> CellSpec<f64> {
        CellSpec::implicit(parse_str("x^2+y^2+z^2").unwrap(), SpatialDomain::cube(2.0)).unwrap()
    }

    #[test]
    fn unit_ball_membership() {
        let c = ball();
        assert!(c.membership([0.0, 0.0, 0.0], 1.0).unwrap().inside);
        assert!(!c.membership([2.0, 0.0, 0.0], 1.0).unwrap().inside);
        // boundary belongs to the cell
        assert!(c.membership([1.0, 0.0, 0.0], 1.0).unwrap().inside);
        // steady cell: t is irrelevant, even non-positive
        assert!(c.membership([0.5, 0.5, 0.5], -3.0).unwrap().inside);
    }

    #[test]
    fn outside_domain_is_never_member() {
        let c = CellSpec::implicit(parse_str("0*x").unwrap(), SpatialDomain::cube(1.0)).unwrap();
        assert!(!c.membership([1.5, 0.0, 0.0], 1.0).unwrap().inside);
    }

    #[test]
    fn domain_error_becomes_flagged_non_member() {
        let c = CellSpec::implicit(parse_str("ln(x)").unwrap(), SpatialDomain::cube(2.0)).unwrap();
        let m = c.membership([-1.0, 0.0, 0.0], 1.0).unwrap();
        assert!(!m.inside);
        assert_eq!(m.diagnostic, Some(EvalError::Domain(DomainKind::LogOfNonPositive)));
    }

    #[test]
    fn time_checked_when_used() {
        let c = CellSpec::implicit(parse_str("x^2 * t").unwrap(), SpatialDomain::cube(2.0)).unwrap();
        assert_eq!(
            c.membership([0.0, 0.0, 0.0], 0.0),
            Err(GeometryError::TimeNotPositive(0.0))
        );
    }

    #[test]
    fn construction_checks() {
        assert_eq!(
            CellSpec::<f64>::height_field(parse_str("x + z").unwrap(), SpatialDomain::centered_square(4.0)),
            Err(GeometryError::HeightFieldUsesZ)
        );
        assert_eq!(
            CellSpec::<f64>::implicit(parse_str("H*x").unwrap(), SpatialDomain::cube(1.0)),
            Err(GeometryError::Eval(EvalError::UnboundParam("H".into())))
        );
    }

    #[test]
    fn height_field_membership_is_subgraph() {
        let c = CellSpec::height_field(parse_str("1 - x^2").unwrap(), SpatialDomain::centered_square(4.0)).unwrap();
        assert!(c.membership([0.0, 0.0, 1.0], 1.0).unwrap().inside);
        assert!(!c.membership([0.0, 0.0, 1.01], 1.0).unwrap().inside);
    }

    #[test]
    fn works_in_single_precision() {
        let c: CellSpec<f32> =
            CellSpec::implicit(parse_str("x^2+y^2+z^2").unwrap(), SpatialDomain::cube(2.0)).unwrap();
        assert!(c.membership([1.0, 0.0, 0.0], 1.0).unwrap().inside);
    }
}
