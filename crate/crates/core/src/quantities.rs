//! Physical constants, scenario definitions and the scaling constants that
//! set the magnitude of the vortex-induced monopole distributions.
//!
//! Every quantity is SI. Field names carry the unit in their doc comment;
//! no runtime unit algebra is performed.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// CODATA 2018 values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Constants {
    /// Reduced Planck constant, J·s.
    pub hbar: f64,
    /// Vacuum permeability, V·s/(A·m).
    pub mu0: f64,
    /// Vacuum permittivity, A·s/(V·m).
    pub eps0: f64,
    /// Speed of light, m/s.
    pub c: f64,
    /// Elementary charge, C.
    pub e_charge: f64,
    /// Bohr radius, m.
    pub a_bohr: f64,
    /// Electron mass, kg.
    pub m_electron: f64,
    /// Atomic mass unit, kg.
    pub atomic_mass_unit: f64,
}

pub const SI: Constants = Constants {
    hbar: 1.054_571_817e-34,
    mu0: 1.256_637_062_12e-6,
    eps0: 8.854_187_812_8e-12,
    c: 299_792_458.0,
    e_charge: 1.602_176_634e-19,
    a_bohr: 5.291_772_109_03e-11,
    m_electron: 9.109_383_701_5e-31,
    atomic_mass_unit: 1.660_539_066_60e-27,
};

impl Constants {
    /// Bohr magneton e·ħ/(2 m_e), A·m².
    pub fn bohr_magneton(&self) -> f64 {
        self.e_charge * self.hbar / (2.0 * self.m_electron)
    }

    /// One debye (1e-21 / c), C·m.
    pub fn debye(&self) -> f64 {
        1e-21 / self.c
    }
}

impl Default for Constants {
    fn default() -> Self {
        SI
    }
}

const ANGSTROM: f64 = 1e-10;

/// Which polarisation mechanism drives the monopole distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DipoleKind {
    /// Atoms carry an electric dipole; the vortex produces magnetic monopoles.
    ElectricDipole,
    /// Atoms carry a magnetic moment; the vortex produces electric monopoles.
    MagneticDipole,
    /// Bulk polarisation χ·E induced by an applied field; magnetic monopoles.
    Susceptibility,
}

impl DipoleKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DipoleKind::ElectricDipole => "electric_dipole",
            DipoleKind::MagneticDipole => "magnetic_dipole",
            DipoleKind::Susceptibility => "susceptibility",
        }
    }

    /// Whether the induced charges are magnetic (potential in A, charge in V·s).
    pub fn produces_magnetic_charge(self) -> bool {
        !matches!(self, DipoleKind::MagneticDipole)
    }

    pub fn potential_unit(self) -> &'static str {
        if self.produces_magnetic_charge() {
            "A"
        } else {
            "V"
        }
    }

    pub fn charge_unit(self) -> &'static str {
        if self.produces_magnetic_charge() {
            "V*s"
        } else {
            "C"
        }
    }

    pub fn field_unit(self) -> &'static str {
        if self.produces_magnetic_charge() {
            "A/m"
        } else {
            "V/m"
        }
    }
}

impl fmt::Display for DipoleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The polarisation source together with exactly the parameters its kind needs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Source {
    ElectricDipole {
        /// Electric dipole moment per atom, C·m.
        dipole: f64,
    },
    MagneticDipole {
        /// Magnetic moment per atom, A·m².
        moment: f64,
    },
    Susceptibility {
        /// Polarisation per applied field, P = χ·E, in C/(V·m).
        /// A dimensionless SI susceptibility χ_SI corresponds to χ = ε₀·χ_SI.
        chi: f64,
        /// Applied electric field, V/m.
        applied_field: f64,
    },
}

impl Source {
    pub fn kind(&self) -> DipoleKind {
        match self {
            Source::ElectricDipole { .. } => DipoleKind::ElectricDipole,
            Source::MagneticDipole { .. } => DipoleKind::MagneticDipole,
            Source::Susceptibility { .. } => DipoleKind::Susceptibility,
        }
    }
}

/// Physical description of a condensate in a hard-walled cylinder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub source: Source,
    /// Vortex winding number n.
    pub vortex_order: u32,
    /// Atomic mass M, kg.
    pub mass: f64,
    /// s-wave scattering length a, m.
    pub scattering_length: f64,
    /// Dimensionless interaction strength n₁d·a.
    pub n1d_a: f64,
    /// Cylinder radius R₀, m.
    pub radius: f64,
    /// Cylinder half-height z₀, m.
    pub half_height: f64,
    /// Free-form assumptions carried into run manifests.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub assumptions: Vec<String>,
}

impl Scenario {
    pub fn kind(&self) -> DipoleKind {
        self.source.kind()
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.mass, self.scattering_length, self.n1d_a, self.radius, self.half_height]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::Scenario("non-finite parameter".into()));
        }
        if self.radius <= 0.0 || self.half_height <= 0.0 {
            return Err(Error::Scenario(format!(
                "R0 and z0 must be positive (got R0 = {}, z0 = {})",
                self.radius, self.half_height
            )));
        }
        if self.mass <= 0.0 {
            return Err(Error::Scenario(format!("mass must be positive (got {})", self.mass)));
        }
        if self.scattering_length < 0.0 || self.n1d_a < 0.0 {
            return Err(Error::Scenario("scattering length and n1d_a must be non-negative".into()));
        }
        if self.n1d_a > 0.0 && self.scattering_length == 0.0 {
            return Err(Error::Scenario("n1d_a > 0 requires a positive scattering length".into()));
        }
        let source_ok = match self.source {
            Source::ElectricDipole { dipole } => dipole.is_finite(),
            Source::MagneticDipole { moment } => moment.is_finite(),
            Source::Susceptibility { chi, applied_field } => chi.is_finite() && applied_field.is_finite(),
        };
        if !source_ok {
            return Err(Error::Scenario("non-finite source parameter".into()));
        }
        Ok(())
    }

    /// Rb-87 in an n = 1 vortex, d = e·a_B, R₀ = z₀ = 2 µm.
    pub fn rb87() -> Self {
        Scenario {
            name: "rb87".into(),
            source: Source::ElectricDipole {
                dipole: SI.e_charge * SI.a_bohr,
            },
            vortex_order: 1,
            mass: 86.909_180_527 * SI.atomic_mass_unit,
            scattering_length: 59.0 * ANGSTROM,
            n1d_a: 100.0,
            radius: 2e-6,
            half_height: 2e-6,
            assumptions: vec!["transition dipole d = e*a_B".into()],
        }
    }

    /// Doubly spin-polarised hydrogen, μ = 2 μ_B, z₀ = 5 mm.
    pub fn hydrogen() -> Self {
        Scenario {
            name: "hydrogen".into(),
            source: Source::MagneticDipole {
                moment: 2.0 * SI.bohr_magneton(),
            },
            vortex_order: 1,
            mass: 1.007_825_032 * SI.atomic_mass_unit,
            scattering_length: 0.72 * ANGSTROM,
            n1d_a: 100.0,
            radius: 10e-6,
            half_height: 5e-3,
            assumptions: vec!["R0 = 10 um assumed; only z0 = 5 mm is fixed for this system".into()],
        }
    }

    /// Superfluid helium-4 polarised by an applied field of 1 V/m.
    pub fn helium() -> Self {
        Scenario {
            name: "helium".into(),
            source: Source::Susceptibility {
                chi: 0.052,
                applied_field: 1.0,
            },
            vortex_order: 1,
            mass: 4.002_603_254 * SI.atomic_mass_unit,
            scattering_length: 104.0 * ANGSTROM,
            n1d_a: 100.0,
            radius: 2e-6,
            half_height: 2e-6,
            assumptions: vec![
                "geometry R0 = z0 = 2 um assumed (same cylinder as rb87); no helium geometry is given".into(),
                "polarisation density P = chi*E*|psi|^2 with chi = 0.052 C/(V*m), no eps0 factor".into(),
                "scattering length 104 A is nominal; it does not enter the scaling constants".into(),
            ],
        }
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "rb87" => Some(Self::rb87()),
            "hydrogen" => Some(Self::hydrogen()),
            "helium" => Some(Self::helium()),
            _ => None,
        }
    }

    pub const PRESETS: [&'static str; 3] = ["rb87", "hydrogen", "helium"];

    /// Parses the flat `key = value` scenario format.
    pub fn parse(text: &str, name: &str, origin: &Path) -> Result<Self> {
        let perr = |line: usize, message: String| Error::Parse {
            path: origin.to_path_buf(),
            line,
            message,
        };
        let mut kind = None;
        let mut n = None;
        let mut mass_amu = None;
        let mut dipole_debye = None;
        let mut dipole_e_ab = None;
        let mut moment_bm = None;
        let mut chi = None;
        let mut field = None;
        let mut a_ang = None;
        let mut n1d_a = None;
        let mut r0 = None;
        let mut z0 = None;

        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| perr(lineno, format!("expected `key = value`, got `{line}`")))?;
            let key = key.trim();
            let value = value.trim();
            let num = || -> Result<f64> {
                value
                    .parse::<f64>()
                    .map_err(|_| perr(lineno, format!("`{key}`: not a number: `{value}`")))
            };
            let slot = match key {
                "kind" => {
                    let k = match value {
                        "electric_dipole" => DipoleKind::ElectricDipole,
                        "magnetic_dipole" => DipoleKind::MagneticDipole,
                        "susceptibility" => DipoleKind::Susceptibility,
                        other => return Err(perr(lineno, format!("unknown kind `{other}`"))),
                    };
                    if kind.replace(k).is_some() {
                        return Err(perr(lineno, "duplicate key `kind`".into()));
                    }
                    continue;
                }
                "n" => {
                    let v: u32 = value
                        .parse()
                        .map_err(|_| perr(lineno, format!("`n`: not a non-negative integer: `{value}`")))?;
                    if n.replace(v).is_some() {
                        return Err(perr(lineno, "duplicate key `n`".into()));
                    }
                    continue;
                }
                "mass_amu" => &mut mass_amu,
                "dipole_debye" => &mut dipole_debye,
                "dipole_e_aB" => &mut dipole_e_ab,
                "moment_bohr_magnetons" => &mut moment_bm,
                "chi" => &mut chi,
                "applied_field_V_per_m" => &mut field,
                "scattering_a_angstrom" => &mut a_ang,
                "n1d_a" => &mut n1d_a,
                "R0_m" => &mut r0,
                "z0_m" => &mut z0,
                other => return Err(perr(lineno, format!("unknown key `{other}`"))),
            };
            if slot.replace(num()?).is_some() {
                return Err(perr(lineno, format!("duplicate key `{key}`")));
            }
        }

        let missing = |k: &str| perr(0, format!("missing key `{k}`"));
        let kind = kind.ok_or_else(|| missing("kind"))?;
        let present = [
            ("dipole_debye", dipole_debye.is_some()),
            ("dipole_e_aB", dipole_e_ab.is_some()),
            ("moment_bohr_magnetons", moment_bm.is_some()),
            ("chi", chi.is_some()),
            ("applied_field_V_per_m", field.is_some()),
        ];
        let allowed: &[&str] = match kind {
            DipoleKind::ElectricDipole => &["dipole_debye", "dipole_e_aB"],
            DipoleKind::MagneticDipole => &["moment_bohr_magnetons"],
            DipoleKind::Susceptibility => &["chi", "applied_field_V_per_m"],
        };
        for (k, set) in present {
            if set && !allowed.contains(&k) {
                return Err(perr(0, format!("key `{k}` is not valid for kind {kind}")));
            }
        }
        let source = match kind {
            DipoleKind::ElectricDipole => match (dipole_debye, dipole_e_ab) {
                (Some(d), None) => Source::ElectricDipole { dipole: d * SI.debye() },
                (None, Some(d)) => Source::ElectricDipole {
                    dipole: d * SI.e_charge * SI.a_bohr,
                },
                (Some(_), Some(_)) => return Err(perr(0, "give exactly one of `dipole_debye`, `dipole_e_aB`".into())),
                (None, None) => return Err(missing("dipole_debye or dipole_e_aB")),
            },
            DipoleKind::MagneticDipole => Source::MagneticDipole {
                moment: moment_bm.ok_or_else(|| missing("moment_bohr_magnetons"))? * SI.bohr_magneton(),
            },
            DipoleKind::Susceptibility => Source::Susceptibility {
                chi: chi.ok_or_else(|| missing("chi"))?,
                applied_field: field.ok_or_else(|| missing("applied_field_V_per_m"))?,
            },
        };
        let scenario = Scenario {
            name: name.to_string(),
            source,
            vortex_order: n.ok_or_else(|| missing("n"))?,
            mass: mass_amu.ok_or_else(|| missing("mass_amu"))? * SI.atomic_mass_unit,
            scattering_length: a_ang.ok_or_else(|| missing("scattering_a_angstrom"))? * ANGSTROM,
            n1d_a: n1d_a.ok_or_else(|| missing("n1d_a"))?,
            radius: r0.ok_or_else(|| missing("R0_m"))?,
            half_height: z0.ok_or_else(|| missing("z0_m"))?,
            assumptions: Vec::new(),
        };
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("scenario");
        Self::parse(&text, name, path)
    }

    /// Renders the scenario in the `key = value` file format.
    pub fn to_file_format(&self) -> String {
        let mut out = format!("# scenario {}\nkind = {}\nn = {}\n", self.name, self.kind(), self.vortex_order);
        out += &format!("mass_amu = {:e}\n", self.mass / SI.atomic_mass_unit);
        match self.source {
            Source::ElectricDipole { dipole } => out += &format!("dipole_e_aB = {:e}\n", dipole / (SI.e_charge * SI.a_bohr)),
            Source::MagneticDipole { moment } => out += &format!("moment_bohr_magnetons = {:e}\n", moment / SI.bohr_magneton()),
            Source::Susceptibility { chi, applied_field } => out += &format!("chi = {chi:e}\napplied_field_V_per_m = {applied_field:e}\n"),
        }
        out += &format!(
            "scattering_a_angstrom = {:e}\nn1d_a = {:e}\nR0_m = {:e}\nz0_m = {:e}\n",
            self.scattering_length / ANGSTROM,
            self.n1d_a,
            self.radius,
            self.half_height
        );
        out
    }
}

/// A scenario with its geometry and scaling constants resolved.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivedScenario {
    pub underlying: Scenario,
    /// Linear atomic density n₁d, 1/m.
    pub n1d: f64,
    /// Total atom number N = 2·z₀·n₁d.
    pub atom_count: f64,
    /// Aspect ratio f = R₀/z₀.
    pub aspect: f64,
    /// Scaling potential Φ₀: A for magnetic charge, V for electric charge.
    pub phi0: f64,
    /// Multiplies |ψ(ξ)|² to give the enclosed charge: V·s or C.
    pub charge_coefficient: f64,
}

/// Resolves n₁d, N, f and the scaling constants.
pub fn derive_geometry(s: &Scenario) -> Result<DerivedScenario> {
    s.validate()?;
    let n1d = if s.n1d_a == 0.0 { 0.0 } else { s.n1d_a / s.scattering_length };
    let mut ds = DerivedScenario {
        underlying: s.clone(),
        n1d,
        atom_count: 2.0 * s.half_height * n1d,
        aspect: s.radius / s.half_height,
        phi0: 0.0,
        charge_coefficient: 0.0,
    };
    ds.phi0 = scaling_potential(&ds);
    ds.charge_coefficient = charge_coefficient(&ds);
    Ok(ds)
}

impl DerivedScenario {
    pub fn kind(&self) -> DipoleKind {
        self.underlying.kind()
    }

    /// Effective line polarisation entering the source term, in C.
    ///
    /// n₁d·d for electric dipoles, −n₁d·μ₀·μ for magnetic moments (the
    /// duality substitution), and 2π·R₀²·χ·E for an induced polarisation.
    pub fn line_polarisation(&self) -> f64 {
        let s = &self.underlying;
        match s.source {
            Source::ElectricDipole { dipole } => self.n1d * dipole,
            Source::MagneticDipole { moment } => -self.n1d * SI.mu0 * moment,
            Source::Susceptibility { chi, applied_field } => 2.0 * PI * s.radius * s.radius * chi * applied_field,
        }
    }

    /// ħ·n·(line polarisation)/M, the common factor of every source quantity.
    fn circulation_strength(&self) -> f64 {
        let s = &self.underlying;
        SI.hbar * f64::from(s.vortex_order) * self.line_polarisation() / s.mass
    }

    /// μ₀ for magnetic monopoles, ε₀ for electric ones.
    pub fn charge_constant(&self) -> f64 {
        if self.kind().produces_magnetic_charge() {
            SI.mu0
        } else {
            SI.eps0
        }
    }

    /// Prefactor of the infinite-cylinder radial field, ħ n n₁d d/(2π M R₀³); A/m or V/m.
    pub fn field_prefactor(&self) -> f64 {
        let r0 = self.underlying.radius;
        self.circulation_strength() / (2.0 * PI * r0.powi(3))
    }

    /// Prefactor multiplying d|ψ|²/dξ in the areal charge density 2πξρ(ξ).
    pub fn areal_prefactor(&self) -> f64 {
        let r0 = self.underlying.radius;
        self.charge_constant() * self.circulation_strength() / r0.powi(4)
    }

    /// Characteristic field Φ₀/R₀ expressed as B = μ₀H (T) or E (V/m).
    pub fn characteristic_field(&self) -> f64 {
        let h = self.phi0 / self.underlying.radius;
        if self.kind().produces_magnetic_charge() {
            SI.mu0 * h
        } else {
            h
        }
    }
}

/// Φ₀ = ħ n n₁d d / (8π² M R₀²), with the kind-specific polarisation.
pub fn scaling_potential(ds: &DerivedScenario) -> f64 {
    let r0 = ds.underlying.radius;
    ds.circulation_strength() / (8.0 * PI * PI * r0 * r0)
}

/// Q coefficient: ħ n N μ₀ d / (M R₀²) (magnetic) or −ħ n N μ / (M c² R₀²) (electric).
pub fn charge_coefficient(ds: &DerivedScenario) -> f64 {
    let s = &ds.underlying;
    2.0 * s.half_height * ds.charge_constant() * ds.circulation_strength() / (s.radius * s.radius)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn constants_are_consistent() {
        let c = SI;
        assert!((c.eps0 * c.mu0 * c.c * c.c - 1.0).abs() < 1e-9);
        for v in [c.hbar, c.mu0, c.eps0, c.c, c.e_charge, c.a_bohr, c.m_electron, c.atomic_mass_unit] {
            assert!(v > 0.0);
        }
    }

    #[test]
    fn rb87_geometry() {
        let ds = derive_geometry(&Scenario::rb87()).unwrap();
        assert_relative_eq!(ds.n1d, 1.7e10, max_relative = 0.01);
        assert_relative_eq!(ds.atom_count, 6.8e4, max_relative = 0.01);
        assert_relative_eq!(ds.aspect, 1.0);
        assert!(ds.phi0 > 0.0);
    }

    #[test]
    fn hydrogen_geometry() {
        let ds = derive_geometry(&Scenario::hydrogen()).unwrap();
        // 100 / 0.72 Å and 2 · 5 mm · n1d
        assert_relative_eq!(ds.n1d, 100.0 / 0.72e-10, max_relative = 1e-12);
        assert_relative_eq!(ds.n1d, 1.39e12, max_relative = 0.005);
        assert_relative_eq!(ds.atom_count, 1.39e10, max_relative = 0.005);
        assert!(ds.phi0 < 0.0);
        assert!(ds.charge_coefficient < 0.0);
    }

    #[test]
    fn zero_interaction_gives_zero_density() {
        let mut s = Scenario::rb87();
        s.n1d_a = 0.0;
        let ds = derive_geometry(&s).unwrap();
        assert_eq!(ds.n1d, 0.0);
        assert_eq!(ds.atom_count, 0.0);
        s.scattering_length = 0.0;
        assert!(derive_geometry(&s).is_ok());
    }

    #[test]
    fn rejects_bad_geometry() {
        let mut s = Scenario::rb87();
        s.scattering_length = 0.0;
        assert!(matches!(derive_geometry(&s), Err(Error::Scenario(_))));
        let mut s = Scenario::rb87();
        s.radius = 0.0;
        assert!(derive_geometry(&s).is_err());
        let mut s = Scenario::rb87();
        s.half_height = -1.0;
        assert!(derive_geometry(&s).is_err());
    }

    fn unit_scenario() -> DerivedScenario {
        // With ħ fixed by SI, pick d so that ħ·n·n1d·d/M = 1 and R0 = 1.
        let s = Scenario {
            name: "unit".into(),
            source: Source::ElectricDipole { dipole: 1.0 / SI.hbar },
            vortex_order: 1,
            mass: 1.0,
            scattering_length: 1.0,
            n1d_a: 1.0,
            radius: 1.0,
            half_height: 1.0,
            assumptions: vec![],
        };
        derive_geometry(&s).unwrap()
    }

    #[test]
    fn unit_inputs_give_one_over_eight_pi_squared() {
        let ds = unit_scenario();
        assert_relative_eq!(ds.phi0, 1.0 / (8.0 * PI * PI), max_relative = 1e-14);
    }

    #[test]
    fn no_vortex_no_charge() {
        let mut s = Scenario::rb87();
        s.vortex_order = 0;
        let ds = derive_geometry(&s).unwrap();
        assert_eq!(ds.phi0, 0.0);
        assert_eq!(ds.charge_coefficient, 0.0);
    }

    #[test]
    fn duality_maps_electric_to_magnetic_constants() {
        let rb = Scenario::rb87();
        let d = match rb.source {
            Source::ElectricDipole { dipole } => dipole,
            _ => unreachable!(),
        };
        let mut dual = rb.clone();
        dual.source = Source::MagneticDipole { moment: -d / SI.mu0 };
        let e = derive_geometry(&rb).unwrap();
        let m = derive_geometry(&dual).unwrap();
        assert_relative_eq!(e.phi0, m.phi0, max_relative = 1e-14);
        // Q_m/μ₀ and Q_e/ε₀ coincide; the residual factor is 1/(μ₀ c² ε₀).
        let factor = 1.0 / (SI.mu0 * SI.c * SI.c * SI.eps0);
        assert_relative_eq!(factor, 1.0, max_relative = 1e-9);
        assert_relative_eq!(e.charge_coefficient / SI.mu0, m.charge_coefficient / SI.eps0, max_relative = 1e-12);
    }

    #[test]
    fn scaling_is_linear_and_inverse_square_in_radius() {
        let base = Scenario::rb87();
        let b = derive_geometry(&base).unwrap();
        let mut twice_n = base.clone();
        twice_n.vortex_order = 2;
        let t = derive_geometry(&twice_n).unwrap();
        assert_relative_eq!(t.phi0, 2.0 * b.phi0, max_relative = 1e-14);
        assert_relative_eq!(t.charge_coefficient, 2.0 * b.charge_coefficient, max_relative = 1e-14);

        let mut dense = base.clone();
        dense.n1d_a *= 2.0;
        let t = derive_geometry(&dense).unwrap();
        assert_relative_eq!(t.phi0, 2.0 * b.phi0, max_relative = 1e-14);
        assert_relative_eq!(t.charge_coefficient, 2.0 * b.charge_coefficient, max_relative = 1e-14);

        let mut wide = base;
        wide.radius *= 2.0;
        let t = derive_geometry(&wide).unwrap();
        assert_relative_eq!(t.phi0, 0.25 * b.phi0, max_relative = 1e-14);
        assert_relative_eq!(t.charge_coefficient, 0.25 * b.charge_coefficient, max_relative = 1e-14);
    }

    #[test]
    fn file_format_roundtrip() {
        for name in Scenario::PRESETS {
            let s = Scenario::preset(name).unwrap();
            let text = s.to_file_format();
            let back = Scenario::parse(&text, name, Path::new("mem")).unwrap();
            assert_eq!(back.kind(), s.kind());
            assert_relative_eq!(back.mass, s.mass, max_relative = 1e-14);
            assert_relative_eq!(back.radius, s.radius, max_relative = 1e-14);
            let a = derive_geometry(&s).unwrap();
            let b = derive_geometry(&back).unwrap();
            assert_relative_eq!(a.phi0, b.phi0, max_relative = 1e-12);
        }
    }

    #[test]
    fn parse_rejects_foreign_keys() {
        let text = "kind = electric_dipole\nn = 1\nmass_amu = 87\ndipole_e_aB = 1\nchi = 0.1\n\
                    scattering_a_angstrom = 59\nn1d_a = 100\nR0_m = 2e-6\nz0_m = 2e-6\n";
        let err = Scenario::parse(text, "x", Path::new("x.txt")).unwrap_err();
        assert!(err.to_string().contains("chi"), "{err}");

        let err = Scenario::parse("kind = electric_dipole\nbogus = 1\n", "x", Path::new("x.txt")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn parse_accepts_comments_and_debye() {
        let text = "# polar molecule\nkind = electric_dipole  # comment\nn = 1\nmass_amu = 87\n\
                    dipole_debye = 1.0\nscattering_a_angstrom = 59\nn1d_a = 0\nR0_m = 2e-6\nz0_m = 2e-6\n";
        let s = Scenario::parse(text, "polar", Path::new("polar.txt")).unwrap();
        match s.source {
            Source::ElectricDipole { dipole } => assert_relative_eq!(dipole, 3.335_640_95e-30, max_relative = 1e-8),
            _ => panic!("wrong kind"),
        }
    }
}
