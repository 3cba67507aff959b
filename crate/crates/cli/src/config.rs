//! Experiment configuration: one JSON document, unknown keys rejected.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use softguide::analysis::GridSpec;
use softguide::eigensolve::DEFAULT_SEED;
use softguide::transverse1d::TransverseProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Experiment {
    Solve1d,
    Solve2d,
    /// Critical depths over `a/rho` and exponents; the profile supplies `a`
    /// and the geometry (if any) the tail length.
    Critical,
    SweepBeta,
    SweepWidth,
    StrongEss,
    DirichletStrip,
    Sgamma,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Self::Solve1d => "solve1d",
            Self::Solve2d => "solve2d",
            Self::Critical => "critical",
            Self::SweepBeta => "sweep_beta",
            Self::SweepWidth => "sweep_width",
            Self::StrongEss => "strong_ess",
            Self::DirichletStrip => "dirichlet_strip",
            Self::Sgamma => "sgamma",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub rho: f64,
    #[serde(default)]
    pub beta: f64,
    #[serde(default = "default_tail")]
    pub tail_length: f64,
}

fn default_tail() -> f64 {
    2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKindConfig {
    PolyWell,
    SquareWell,
    DeltaPoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileConfig {
    pub kind: ProfileKindConfig,
    #[serde(default)]
    pub exponent: Option<u32>,
    #[serde(default)]
    pub a: Option<f64>,
    /// Well depth, or the strength of a point interaction.
    pub depth: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumericConfig {
    /// 1D cell count; absent means the extrapolated refinement ladder.
    #[serde(default)]
    pub n: Option<usize>,
    /// 1D half-length used with `n`.
    #[serde(default)]
    pub half_length: Option<f64>,
    /// 2D node spacing.
    #[serde(default)]
    pub h: Option<f64>,
    /// 2D spacings for refinement studies.
    #[serde(default)]
    pub h_list: Vec<f64>,
    #[serde(default)]
    pub pad: Option<f64>,
    #[serde(default = "default_k")]
    pub k: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

fn default_k() -> usize {
    4
}
fn default_tol() -> f64 {
    1e-11
}
fn default_seed() -> u64 {
    DEFAULT_SEED
}

impl Default for NumericConfig {
    fn default() -> Self {
        Self {
            n: None,
            half_length: None,
            h: None,
            h_list: Vec::new(),
            pad: None,
            k: default_k(),
            tol: default_tol(),
            seed: default_seed(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default)]
    pub a_over_rho: Vec<f64>,
    #[serde(default)]
    pub exponents: Vec<u32>,
    /// Critical search bracket in units of `sqrt(depth) A`.
    #[serde(default)]
    pub strength_bracket: Option<[f64; 2]>,
    /// Bisection tolerance relative to the bracket midpoint.
    #[serde(default)]
    pub rel_tol: Option<f64>,
    #[serde(default)]
    pub betas: Vec<f64>,
    /// Counting level; exclusive with `nu_fraction`.
    #[serde(default)]
    pub nu: Option<f64>,
    /// Counting level as `eps_rho + f (eps_v - eps_rho)`.
    #[serde(default)]
    pub nu_fraction: Option<f64>,
    #[serde(default)]
    pub lambdas: Vec<f64>,
    #[serde(default)]
    pub rhos: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    #[serde(default)]
    pub geometry: Option<GeometryConfig>,
    #[serde(default)]
    pub profile: Option<ProfileConfig>,
    #[serde(default)]
    pub numeric: NumericConfig,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    /// Output directory; not part of the hash.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<String>,
}

/// Field-level validation failures.
#[derive(Debug, Clone, PartialEq)]
pub struct Invalid(pub Vec<String>);

impl std::fmt::Display for Invalid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0.join("; "))
    }
}

struct Checker(Vec<String>);

impl Checker {
    fn positive(&mut self, field: &str, v: f64) {
        if !(v > 0.0 && v.is_finite()) {
            self.0
                .push(format!("{field}: must be positive and finite, got {v}"));
        }
    }

    fn nonnegative(&mut self, field: &str, v: f64) {
        if !(v >= 0.0 && v.is_finite()) {
            self.0
                .push(format!("{field}: must be nonnegative and finite, got {v}"));
        }
    }

    fn require<T>(&mut self, field: &str, v: Option<T>) -> Option<T> {
        if v.is_none() {
            self.0.push(format!("{field}: required"));
        }
        v
    }

    fn nonempty<T>(&mut self, field: &str, v: &[T]) {
        if v.is_empty() {
            self.0.push(format!("{field}: must not be empty"));
        }
    }

    fn fail(&mut self, field: &str, msg: impl std::fmt::Display) {
        self.0.push(format!("{field}: {msg}"));
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, Invalid> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Invalid(vec![e.to_string()]))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Canonical form: defaults filled in, keys sorted, output directory dropped.
    pub fn canonical_json(&self) -> String {
        let mut c = self.clone();
        c.out_dir = None;
        let value = serde_json::to_value(&c).expect("config serializes");
        // serde_json maps are ordered by key
        serde_json::to_string(&value).expect("value serializes")
    }

    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_json().as_bytes()))
    }

    pub fn profile(&self) -> Option<TransverseProfile> {
        let p = self.profile.as_ref()?;
        match p.kind {
            ProfileKindConfig::PolyWell => {
                TransverseProfile::poly_well(p.exponent?, p.a?, p.depth).ok()
            }
            ProfileKindConfig::SquareWell => TransverseProfile::square_well(p.a?, p.depth).ok(),
            ProfileKindConfig::DeltaPoint => TransverseProfile::delta_point(p.depth).ok(),
        }
    }

    pub fn grid_spec(&self) -> GridSpec {
        let n = &self.numeric;
        let mut spec = GridSpec::new(n.h.unwrap_or(f64::NAN));
        spec.pad = n.pad;
        spec.k = n.k;
        spec.tol = n.tol;
        spec.seed = n.seed;
        spec
    }

    pub fn validate(&self) -> Result<(), Invalid> {
        let mut c = Checker(Vec::new());
        let n = &self.numeric;
        if n.k == 0 {
            c.fail("numeric.k", "must be at least 1");
        }
        if !(n.tol > 0.0 && n.tol < 1e-3) {
            c.fail(
                "numeric.tol",
                format!("must lie in (0, 1e-3), got {}", n.tol),
            );
        }
        if let Some(h) = n.h {
            c.positive("numeric.h", h);
        }
        for h in &n.h_list {
            c.positive("numeric.h_list", *h);
        }
        if let Some(p) = n.pad {
            c.positive("numeric.pad", p);
        }
        if let Some(l) = n.half_length {
            c.positive("numeric.half_length", l);
        }
        if let Some(cells) = n.n {
            if cells < 200 {
                c.fail("numeric.n", format!("must be at least 200, got {cells}"));
            }
        }
        if let Some(g) = &self.geometry {
            c.positive("geometry.rho", g.rho);
            if !(0.0..std::f64::consts::FRAC_PI_2).contains(&g.beta) {
                c.fail(
                    "geometry.beta",
                    format!("must lie in [0, pi/2), got {}", g.beta),
                );
            }
            c.positive("geometry.tail_length", g.tail_length);
        }
        if let Some(p) = &self.profile {
            c.nonnegative("profile.depth", p.depth);
            match p.kind {
                ProfileKindConfig::PolyWell => {
                    match p.exponent {
                        Some(e) if e >= 2 && e % 2 == 0 => {}
                        Some(e) => c.fail(
                            "profile.exponent",
                            format!("must be an even integer >= 2, got {e}"),
                        ),
                        None => c.fail("profile.exponent", "required for poly_well"),
                    }
                    if let Some(a) = c.require("profile.a", p.a) {
                        c.positive("profile.a", a);
                    }
                }
                ProfileKindConfig::SquareWell => {
                    if p.exponent.is_some() {
                        c.fail("profile.exponent", "only valid for poly_well");
                    }
                    if let Some(a) = c.require("profile.a", p.a) {
                        c.positive("profile.a", a);
                    }
                }
                ProfileKindConfig::DeltaPoint => {
                    if p.exponent.is_some() || p.a.is_some() {
                        c.fail("profile", "delta_point takes only depth");
                    }
                    c.positive("profile.depth", p.depth);
                }
            }
            if let (Some(g), Some(a)) = (&self.geometry, p.a) {
                if a >= g.rho && p.kind != ProfileKindConfig::DeltaPoint {
                    c.fail(
                        "profile.a",
                        format!("must be smaller than geometry.rho = {}", g.rho),
                    );
                }
            }
        }
        let regular = matches!(
            self.profile.as_ref().map(|p| p.kind),
            Some(ProfileKindConfig::PolyWell | ProfileKindConfig::SquareWell)
        );
        let sweep = self.sweep.as_ref();
        use Experiment::*;
        match self.experiment {
            Solve1d => {
                c.require("profile", self.profile.as_ref());
                if n.n.is_some() != n.half_length.is_some() {
                    c.fail("numeric.n", "n and half_length go together");
                }
            }
            Solve2d => {
                c.require("geometry", self.geometry.as_ref());
                c.require("profile", self.profile.as_ref());
                c.require("numeric.h", n.h);
                if !regular {
                    c.fail("profile.kind", "solve2d needs a regular profile");
                }
            }
            Critical => {
                if let Some(s) = c.require("sweep", sweep) {
                    c.nonempty("sweep.a_over_rho", &s.a_over_rho);
                    c.nonempty("sweep.exponents", &s.exponents);
                    for r in &s.a_over_rho {
                        if !(*r > 0.0 && *r < 1.0) {
                            c.fail(
                                "sweep.a_over_rho",
                                format!("entries must lie in (0, 1), got {r}"),
                            );
                        }
                    }
                    for e in &s.exponents {
                        if *e < 2 || e % 2 != 0 {
                            c.fail(
                                "sweep.exponents",
                                format!("entries must be even and >= 2, got {e}"),
                            );
                        }
                    }
                    if let Some([lo, hi]) = c.require("sweep.strength_bracket", s.strength_bracket)
                    {
                        if !(lo > 0.0 && lo < hi && hi.is_finite()) {
                            c.fail(
                                "sweep.strength_bracket",
                                format!("need 0 < lo < hi, got [{lo}, {hi}]"),
                            );
                        }
                    }
                    if let Some(t) = c.require("sweep.rel_tol", s.rel_tol) {
                        c.positive("sweep.rel_tol", t);
                    }
                }
                if let Some(p) = c.require("profile", self.profile.as_ref()) {
                    if p.kind != ProfileKindConfig::PolyWell {
                        c.fail("profile.kind", "critical sweeps use poly_well profiles");
                    }
                    c.require("profile.a", p.a);
                }
                c.require("numeric.h", n.h);
            }
            SweepBeta => {
                c.require("geometry", self.geometry.as_ref());
                c.require("profile", self.profile.as_ref());
                c.require("numeric.h", n.h);
                if !regular {
                    c.fail("profile.kind", "sweep_beta needs a regular profile");
                }
                if let Some(s) = c.require("sweep", sweep) {
                    c.nonempty("sweep.betas", &s.betas);
                    for b in &s.betas {
                        if !(*b > 0.0 && *b < std::f64::consts::FRAC_PI_2) {
                            c.fail(
                                "sweep.betas",
                                format!("entries must lie in (0, pi/2), got {b}"),
                            );
                        }
                    }
                    match (s.nu, s.nu_fraction) {
                        (Some(_), None) => {}
                        (None, Some(f)) if f > 0.0 && f < 1.0 => {}
                        (None, Some(f)) => {
                            c.fail("sweep.nu_fraction", format!("must lie in (0, 1), got {f}"))
                        }
                        _ => c.fail("sweep.nu", "exactly one of nu and nu_fraction is required"),
                    }
                }
            }
            SweepWidth => {
                c.require("profile", self.profile.as_ref());
                if let Some(s) = c.require("sweep", sweep) {
                    c.nonempty("sweep.rhos", &s.rhos);
                    for r in &s.rhos {
                        c.positive("sweep.rhos", *r);
                    }
                }
            }
            StrongEss => {
                c.require("geometry", self.geometry.as_ref());
                c.require("profile", self.profile.as_ref());
                if !regular {
                    c.fail("profile.kind", "strong_ess needs a regular profile");
                }
                if let Some(s) = c.require("sweep", sweep) {
                    c.nonempty("sweep.lambdas", &s.lambdas);
                    for l in &s.lambdas {
                        c.nonnegative("sweep.lambdas", *l);
                    }
                }
            }
            DirichletStrip => {
                c.require("geometry", self.geometry.as_ref());
                if let Some(p) = c.require("profile", self.profile.as_ref()) {
                    c.require("profile.a", p.a);
                }
                c.nonempty("numeric.h_list", &n.h_list);
                if !regular {
                    c.fail("profile.kind", "dirichlet_strip needs a regular profile");
                }
            }
            Sgamma => {
                c.require("geometry", self.geometry.as_ref());
            }
        }
        if c.0.is_empty() {
            Ok(())
        } else {
            Err(Invalid(c.0))
        }
    }
}
