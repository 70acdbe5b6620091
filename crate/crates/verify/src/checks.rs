//! Registry of named checks, their anchors and default tolerances.

use std::fmt;
use std::str::FromStr;

use crate::error::VerifyError;

/// A group of checks that share their construction and sample points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Webster,
    Comparison,
    Submersion,
    Fefferman,
    Rescale,
    ExplicitEinstein,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Webster,
        Suite::Comparison,
        Suite::Submersion,
        Suite::Fefferman,
        Suite::Rescale,
        Suite::ExplicitEinstein,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Suite::Webster => "webster",
            Suite::Comparison => "comparison",
            Suite::Submersion => "submersion",
            Suite::Fefferman => "fefferman",
            Suite::Rescale => "rescale",
            Suite::ExplicitEinstein => "explicit_einstein",
        }
    }

    /// Parses a comma-separated list; `all` expands to every suite. Duplicates are dropped.
    pub fn parse_list(s: &str) -> Result<Vec<Suite>, VerifyError> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part == "all" {
                out.extend(Suite::ALL);
            } else {
                out.push(part.parse()?);
            }
        }
        if out.is_empty() {
            return Err(VerifyError::Usage("empty suite list".into()));
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl FromStr for Suite {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.id() == s)
            .ok_or_else(|| VerifyError::Usage(format!("unknown suite `{s}`")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// How per-point values are reduced and compared with the tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    /// Largest value must not exceed the tolerance.
    Max,
    /// Smallest value must strictly exceed the tolerance (a lower bound).
    Min,
    /// `max − min` over the points must not exceed the tolerance.
    Spread,
}

impl Bound {
    pub fn id(self) -> &'static str {
        match self {
            Bound::Max => "max",
            Bound::Min => "min",
            Bound::Spread => "spread",
        }
    }
}

/// Which bases a check applies to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Applies {
    Always,
    FlatOnly,
    CurvedOnly,
}

impl Applies {
    pub fn includes(self, flat: bool) -> bool {
        match self {
            Applies::Always => true,
            Applies::FlatOnly => flat,
            Applies::CurvedOnly => !flat,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CheckSpec {
    pub name: &'static str,
    pub suite: Suite,
    pub anchor: &'static str,
    pub tolerance: f64,
    pub bound: Bound,
    pub applies: Applies,
}

const fn check(name: &'static str, suite: Suite, anchor: &'static str, tolerance: f64) -> CheckSpec {
    CheckSpec {
        name,
        suite,
        anchor,
        tolerance,
        bound: Bound::Max,
        applies: Applies::Always,
    }
}

const fn with(spec: CheckSpec, bound: Bound, applies: Applies) -> CheckSpec {
    CheckSpec { bound, applies, ..spec }
}

use Suite::*;

/// Every check the suite runner knows about, in report order.
pub const CHECKS: &[CheckSpec] = &[
    check("structure.reeb", Webster, "θ(T) = 1, T⌟dθ = 0", 1e-10),
    check("structure.j_squared", Webster, "J² = −1 on H, J(T) = 0", 1e-10),
    check("structure.levi_symmetry", Webster, "L_θ = dθ(·,J·) symmetric on H", 1e-10),
    check("structure.integrability", Webster, "[JX,Y] + [X,JY] ∈ H and the Nijenhuis condition", 1e-8),
    with(check("structure.contact", Webster, "θ ∧ (dθ)^m ≠ 0", 1e-6), Bound::Min, Applies::Always),
    check("webster.transversal_symmetry", Webster, "[T,X] + J[T,JX] = 0, L_T g_θ = 0", 1e-8),
    check("webster.metricity", Webster, "∇^W g_θ = 0", 1e-8),
    check("webster.theta_parallel", Webster, "∇^W θ = 0", 1e-8),
    check("webster.j_parallel", Webster, "∇^W J = 0", 1e-8),
    check("webster.torsion_horizontal", Webster, "Tor^W(X,Y) = L_θ(JX,Y) T on H", 1e-8),
    check("webster.torsion_reeb_identity", Webster, "Tor^W(T,X) = −½([T,X] + J[T,JX])", 1e-8),
    check("webster.reeb_torsion", Webster, "Tor^W(T,·) = 0", 1e-8),
    check("webster.curvature_symmetries", Webster, "R^W antisymmetries, J-invariance, W = −Wᵀ", 1e-8),
    check("webster.einstein", Webster, "W = −(scal^W/m) dθ, Ric^W = iW", 1e-7),
    check("webster.scal_relation", Webster, "scal^W = scal^h/2 (relative)", 1e-7),
    with(check("webster.scal_constancy", Webster, "scal^W constant", 1e-8), Bound::Spread, Applies::Always),
    with(check("webster.ricci_flat", Webster, "W = 0 over a flat base", 1e-9), Bound::Max, Applies::FlatOnly),
    check("comparison.curvature_formula", Comparison, "R^W = R^g + five correction terms (relative)", 1e-7),
    check("comparison.bianchi", Comparison, "cyclic sum of R^W(X,Y)Z = 0", 1e-8),
    check("comparison.pair_symmetry", Comparison, "R^W(X,Y,Z,V) = R^W(Z,V,X,Y)", 1e-8),
    check("comparison.j_pair", Comparison, "R^W(X,JY,JZ,V) = R^W(JX,Y,Z,JV)", 1e-8),
    check("comparison.ricci_horizontal", Comparison, "Ric^g(X,Y) = −W(X,JY) − ½g_θ(X,Y) on H", 1e-7),
    check("comparison.ricci_w_reeb", Comparison, "Ric^W(T,·) = 0", 1e-8),
    check("comparison.ricci_tt", Comparison, "Ric^g(T,T) = (m/2) g_θ(T,T)", 1e-7),
    check("comparison.ricci_tx", Comparison, "Ric^g(T,X) = 0 on H", 1e-8),
    check("comparison.r_xtt", Comparison, "R^g(X,T)T = ¼X on H", 1e-7),
    check("kahler.j_squared", Submersion, "J² = −1 on the base", 1e-10),
    check("kahler.j_parallel", Submersion, "∇^h J = 0", 1e-8),
    check("kahler.einstein", Submersion, "Ric^h = (scal^h/2m) h", 1e-7),
    check("kahler.gamma", Submersion, "dγ = h(·,J·)", 1e-9),
    check("kahler.scal", Submersion, "measured scal^h equals the catalog value", 1e-7),
    check("construction.reeb", Submersion, "T = −(scal^h/2m) ∂t, or −∂t over a flat base", 1e-10),
    check("construction.connection_curvature", Submersion, "da = π*Ric^h(·,J·), ρ_ac = ia", 1e-8),
    check("construction.dtheta_base", Submersion, "dθ = π*h(J·,·) on H", 1e-10),
    check("submersion.metric", Submersion, "g_θ(X*,Y*) = h(X,Y)", 1e-10),
    check("submersion.ricci_tt", Submersion, "Ric^g(T,T) = (m/2) g_θ(T,T)", 1e-7),
    check("submersion.ricci_tx", Submersion, "Ric^g(T,X*) = 0", 1e-8),
    check("submersion.ricci_horizontal", Submersion, "Ric^h(X,Y) = Ric^g(X*,Y*) + ½ g_θ(X*,Y*)", 1e-7),
    check("submersion.ricci_webster", Submersion, "Ric^h(X,Y) = −W(X*,JY*)", 1e-7),
    check("fefferman.signature", Fefferman, "f is Lorentzian, signature (2m+1, 1)", 0.0),
    check("fefferman.null_pair", Fefferman, "f(P,T*) = 1, f(P,P) = f(T*,T*) = 0", 1e-12),
    check("fefferman.orthogonality", Fefferman, "f(X*,P) = f(X*,T*) = 0", 1e-12),
    check("fefferman.levi", Fefferman, "f(X*,Y*) = L_θ(X,Y)", 1e-12),
    check("fefferman.closed_form_metric", Fefferman, "f = π*h + C(β₂² − β₁²)", 1e-10),
    check("fefferman.lightlike", Fefferman, "π*θ and A_θ lightlike", 1e-10),
    check("fefferman.connection_curvature", Fefferman, "dA^W = −π*Ric^W", 1e-8),
    check("fefferman.ricci_closed_form", Fefferman, "Ric^f = mS f + (m/2) ds²", 1e-6),
    check("fefferman.ricci_closed_form_b", Fefferman, "Ric^f = mS f + (2m/(m+2)²) b², b = A_θ − ((m+2)/2) S θ", 1e-6),
    check("fefferman.ricci_components", Fefferman, "Ric(P,P) = m/2, Ric(T*,P) = (m/2)S, Ric(T*,T*) = (m/2)S²", 1e-7),
    check("fefferman.scalar", Fefferman, "scal^f = mS(2m+1) (relative)", 1e-7),
    check("fefferman.trace_free_form", Fefferman, "Ric₀ = (m/2) ds² + (mS/(2m+2)) f", 1e-7),
    with(check("fefferman.never_einstein", Fefferman, "Ric₀(P,P) bounded away from zero", 0.49), Bound::Min, Applies::Always),
    check("fefferman.r_p_tstar", Fefferman, "R(P,T*) = 0", 1e-7),
    check("fefferman.r_x_p_tstar", Fefferman, "R(X*,P)T* = ¼S X*", 1e-7),
    check("fefferman.r_p_x_y", Fefferman, "R(P,X*)Y* = ¼L(X,Y)(T* + SP)", 1e-7),
    check("fefferman.r_tstar_x_y", Fefferman, "R(T*,X*)Y* = ¼S L(X,Y)(T* + SP)", 1e-7),
    check("fefferman.r_horizontal", Fefferman, "R(X*,Y*)Z* in terms of R^W and dθ", 1e-7),
    check("fefferman.nabla_xy", Fefferman, "∇_{X*}Y* = (∇^W_X Y)* − ½dθ(X,Y)(T* + SP)", 1e-8),
    check("fefferman.nabla_tstar_x", Fefferman, "∇_{T*}X* = ∇_{X*}T* = ½S(JX)*", 1e-8),
    check("fefferman.nabla_p_x", Fefferman, "∇_P X* = ∇_{X*}P = ½(JX)*", 1e-8),
    check("fefferman.nabla_vertical", Fefferman, "∇_P P = ∇_P T* = ∇_{T*}P = ∇_{T*}T* = 0", 1e-8),
    check("fefferman.parallel", Fefferman, "∇(T* − SP) = 0, ∇ds = 0", 1e-8),
    check("fefferman.dual", Fefferman, "f(T* − SP, ·) = ds", 1e-10),
    check("fefferman.closed_sum", Fefferman, "d(a_W + a_ac) = 0", 1e-10),
    check("fefferman.killing", Fefferman, "T* and P are Killing", 1e-8),
    check("rescale.ode", Rescale, "φ'' − φ'² = 1/(m+2)²", 1e-10),
    check("rescale.einstein", Rescale, "Ric(f̃) = λ f̃, λ = (2m+1) scal^h / (4m(m+1))", 1e-6),
    check("rescale.scalar", Rescale, "scal(f̃) = (2m+1) scal^h / (2m) (relative)", 1e-6),
    check("rescale.oracle", Rescale, "Ric(e^{2φ}f) = Ric(f) + C_φ", 1e-7),
    check("rescale.support", Rescale, "C_φ = c₁ ds² + c₂ f", 1e-7),
    check("rescale.support_ds2", Rescale, "c₁ = C_φ(P,P) = −m/2", 1e-7),
    with(check("rescale.support_f", Rescale, "C_φ = c₁ ds² over a flat base", 1e-10), Bound::Max, Applies::FlatOnly),
    check("rescale.slice", Rescale, "f̃ = f on s = 0", 1e-14),
    check("explicit.signature", ExplicitEinstein, "f̃ is Lorentzian, signature (2m+1, 1)", 0.0),
    check("explicit.einstein", ExplicitEinstein, "Ric = λ f̃ for the chart metric", 1e-6),
    check("explicit.scalar", ExplicitEinstein, "scal = (2m+1) scal^h / (2m) (relative)", 1e-6),
    check("explicit.pipeline", ExplicitEinstein, "chart metric pulled back equals the rescaled Fefferman metric", 1e-6),
    with(check("explicit.sasaki_mixed_metric", ExplicitEinstein, "cos²(t) f̃ has no mixed dt terms", 1e-12), Bound::Max, Applies::CurvedOnly),
    with(check("explicit.sasaki_mixed_curvature", ExplicitEinstein, "curvature of cos²(t) f̃ has no t components", 1e-7), Bound::Max, Applies::CurvedOnly),
    with(check("explicit.sasaki_einstein", ExplicitEinstein, "the (x, τ) factor is Einstein with constant scal^h/(2(m+1))", 1e-7), Bound::Max, Applies::CurvedOnly),
];

pub fn find(name: &str) -> Option<&'static CheckSpec> {
    CHECKS.iter().find(|c| c.name == name)
}

pub fn for_suite(suite: Suite) -> impl Iterator<Item = &'static CheckSpec> {
    CHECKS.iter().filter(move |c| c.suite == suite)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn names_are_unique_and_every_suite_has_checks() {
        let names: HashSet<_> = CHECKS.iter().map(|c| c.name).collect();
        assert_eq!(names.len(), CHECKS.len());
        for s in Suite::ALL {
            assert!(for_suite(s).count() > 0, "{s}");
        }
    }

    #[test]
    fn suite_lists() {
        assert_eq!(Suite::parse_list("all").unwrap(), Suite::ALL.to_vec());
        assert_eq!(
            Suite::parse_list("rescale,webster,rescale").unwrap(),
            vec![Suite::Webster, Suite::Rescale]
        );
        assert!(Suite::parse_list("bogus").is_err());
        assert!(Suite::parse_list("").is_err());
    }
}
