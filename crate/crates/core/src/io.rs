//! CSV exports with JSON sidecars.
//!
//! Every CSV is comma-separated with LF line endings and one header line;
//! floats are written with 17 significant digits so they read back bit for
//! bit. The sidecar sits next to the CSV with the extension `.json`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{PotentialGrid, Weighting};
use crate::gp_radial::{density_derivative, CondensateProfile, RadialGrid, SolverTag};
use crate::monopole::{ChargeProfile, NeutralityReport};
use crate::quantities::DipoleKind;

pub const PROFILE_HEADER: &str = "xi,psi,psi2,dpsi2_dxi";
pub const CHARGE_HEADER: &str = "xi,areal_density,cumulative";
pub const POTENTIAL_HEADER: &str = "xi,z,phi_over_phi0";
pub const FIELD_HEADER: &str = "xi,field,field_over_prefactor";

/// Path of the JSON sidecar belonging to a CSV.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

fn write_table(path: &Path, header: &str, rows: impl Iterator<Item = Vec<f64>>) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    w.write_record(header.split(',')).map_err(|e| csv_error(path, e))?;
    for row in rows {
        w.write_record(row.iter().map(|v| format!("{v:.16e}")))
            .map_err(|e| csv_error(path, e))?;
    }
    w.flush()?;
    Ok(())
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        kind => Error::Parse {
            path: path.to_path_buf(),
            line,
            message: format!("{kind:?}"),
        },
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        message: e.to_string(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileMeta {
    pub n: u32,
    pub n1d_a: f64,
    pub eigenvalue_eps: f64,
    pub solver_tag: SolverTag,
    pub grid_size: usize,
    pub xi_min: f64,
    pub residual: Option<f64>,
    pub norm: f64,
    pub psi_at_wall: f64,
}

impl ProfileMeta {
    pub fn of(p: &CondensateProfile) -> Self {
        ProfileMeta {
            n: p.vortex_order,
            n1d_a: p.n1d_a,
            eigenvalue_eps: p.eigenvalue,
            solver_tag: p.solver,
            grid_size: p.grid.len(),
            xi_min: p.grid.xi_min(),
            residual: p.residual.is_finite().then_some(p.residual),
            norm: p.norm(),
            psi_at_wall: *p.psi.last().unwrap(),
        }
    }
}

/// Writes `xi,psi,psi2,dpsi2_dxi` and the profile sidecar.
pub fn write_profile(path: &Path, p: &CondensateProfile) -> Result<()> {
    let slope = density_derivative(p);
    let rows = p.xi().iter().zip(&p.psi).zip(slope).map(|((&x, &v), d)| vec![x, v, v * v, d]);
    write_table(path, PROFILE_HEADER, rows)?;
    write_json(&sidecar_path(path), &ProfileMeta::of(p))
}

fn parse_rows(path: &Path, header: &str, columns: usize) -> Result<Vec<Vec<f64>>> {
    let err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut r = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    let found = r.headers().map_err(|e| csv_error(path, e))?.iter().collect::<Vec<_>>().join(",");
    if found != header {
        return Err(err(1, format!("expected header '{header}', found '{found}'")));
    }
    let mut rows = Vec::new();
    for record in r.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let row: Vec<f64> = record
            .iter()
            .map(str::parse::<f64>)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| err(line, format!("bad number: {e}")))?;
        if row.len() != columns {
            return Err(err(line, format!("expected {columns} columns, found {}", row.len())));
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Reads a profile CSV and its sidecar back into a profile.
pub fn read_profile(path: &Path) -> Result<CondensateProfile> {
    let meta: ProfileMeta = read_json(&sidecar_path(path))?;
    let rows = parse_rows(path, PROFILE_HEADER, 4)?;
    if rows.len() != meta.grid_size {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: rows.len() + 1,
            message: format!("sidecar announces {} rows, CSV has {}", meta.grid_size, rows.len()),
        });
    }
    let grid = RadialGrid::from_points(rows.iter().map(|r| r[0]).collect())?;
    let psi = rows.iter().map(|r| r[1]).collect();
    Ok(CondensateProfile {
        grid,
        psi,
        eigenvalue: meta.eigenvalue_eps,
        vortex_order: meta.n,
        n1d_a: meta.n1d_a,
        solver: meta.solver_tag,
        residual: meta.residual.unwrap_or(f64::NAN),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChargeMeta {
    pub kind: DipoleKind,
    /// Q(1) in `charge_unit`.
    pub total: f64,
    /// Q(ξ)/|ψ(ξ)|² in `charge_unit`.
    pub coefficient: f64,
    pub charge_unit: String,
    /// areal_density / (d|ψ|²/dξ), in `areal_unit`.
    pub areal_prefactor: f64,
    pub areal_unit: String,
    pub neutrality: Option<NeutralityReport>,
}

/// Writes `xi,areal_density,cumulative` in physical units and the charge sidecar.
pub fn write_charge(path: &Path, cp: &ChargeProfile, neutrality: Option<NeutralityReport>) -> Result<()> {
    let rows = (0..cp.xi().len()).map(|i| vec![cp.xi()[i], cp.areal_density[i], cp.cumulative[i]]);
    write_table(path, CHARGE_HEADER, rows)?;
    let meta = ChargeMeta {
        kind: cp.kind,
        total: cp.total,
        coefficient: cp.coefficient,
        charge_unit: cp.kind.charge_unit().to_string(),
        areal_prefactor: cp.areal_prefactor,
        areal_unit: format!("{}/m^3", cp.kind.charge_unit()),
        neutrality,
    };
    write_json(&sidecar_path(path), &meta)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialMeta {
    pub f_aspect: f64,
    pub quad_tol: f64,
    pub weighting: Weighting,
    pub phi0: f64,
    pub phi0_unit: String,
    pub nxi: usize,
    pub nz: usize,
    pub rim_points: Vec<(f64, f64)>,
    pub failed_points: usize,
    pub max_error: f64,
}

/// Writes `xi,z,phi_over_phi0` (ξ-major, z ≥ 0 only) and the potential sidecar.
pub fn write_potential(path: &Path, pg: &PotentialGrid) -> Result<()> {
    let nz = pg.nz();
    let rows = (0..pg.phi_over_phi0.len()).map(|k| vec![pg.xi_values[k / nz], pg.z_values[k % nz], pg.phi_over_phi0[k]]);
    write_table(path, POTENTIAL_HEADER, rows)?;
    let meta = PotentialMeta {
        f_aspect: pg.f_aspect,
        quad_tol: pg.quad_tol,
        weighting: pg.weighting,
        phi0: pg.phi0,
        phi0_unit: pg.phi0_unit.clone(),
        nxi: pg.nxi(),
        nz,
        rim_points: pg.rim_points.clone(),
        failed_points: pg.failed_points,
        max_error: pg.max_error,
    };
    write_json(&sidecar_path(path), &meta)
}

/// Reads a potential CSV and sidecar.
pub fn read_potential(path: &Path) -> Result<PotentialGrid> {
    let meta: PotentialMeta = read_json(&sidecar_path(path))?;
    let rows = parse_rows(path, POTENTIAL_HEADER, 3)?;
    if rows.len() != meta.nxi * meta.nz {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: rows.len() + 1,
            message: format!("expected {} x {} rows, found {}", meta.nxi, meta.nz, rows.len()),
        });
    }
    Ok(PotentialGrid {
        xi_values: (0..meta.nxi).map(|i| rows[i * meta.nz][0]).collect(),
        z_values: rows[..meta.nz].iter().map(|r| r[1]).collect(),
        phi_over_phi0: rows.iter().map(|r| r[2]).collect(),
        f_aspect: meta.f_aspect,
        quad_tol: meta.quad_tol,
        weighting: meta.weighting,
        phi0: meta.phi0,
        phi0_unit: meta.phi0_unit,
        rim_points: meta.rim_points,
        failed_points: meta.failed_points,
        max_error: meta.max_error,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldMeta {
    pub kind: DipoleKind,
    /// ħ n n₁d d / (2π M R₀³) in `unit`.
    pub prefactor: f64,
    pub unit: String,
}

/// Writes the infinite-cylinder field `xi,field,field_over_prefactor` and its sidecar.
pub fn write_field(path: &Path, xi: &[f64], field: &[f64], meta: &FieldMeta) -> Result<()> {
    let rows = xi.iter().zip(field).map(|(&x, &h)| {
        let scaled = if meta.prefactor == 0.0 { 0.0 } else { h / meta.prefactor };
        vec![x, h, scaled]
    });
    write_table(path, FIELD_HEADER, rows)?;
    write_json(&sidecar_path(path), meta)
}

pub fn write_json_file<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    write_json(path, value)
}

pub fn read_json_file<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    read_json(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{potential_grid, GridSpec};
    use crate::gp_radial::{solve_profile, DEFAULT_TOL};
    use crate::quantities::{derive_geometry, Scenario};

    #[test]
    fn profile_round_trips_bit_for_bit() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("profile.csv");
        let p = solve_profile(1, 10.0, &RadialGrid::default(), DEFAULT_TOL).unwrap();
        write_profile(&path, &p).unwrap();
        let back = read_profile(&path).unwrap();
        assert_eq!(back, p);
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("xi,psi,psi2,dpsi2_dxi\n"));
        assert_eq!(text.lines().count(), 2049);
        assert!(!text.contains('\r'));
    }

    #[test]
    fn potential_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("phi.csv");
        let p = solve_profile(1, 100.0, &RadialGrid::default(), DEFAULT_TOL).unwrap();
        let ds = derive_geometry(&Scenario::rb87()).unwrap();
        let spec = GridSpec {
            nxi: 16,
            nz: 17,
            ..GridSpec::default()
        };
        let pg = potential_grid(&p, &ds, &spec).unwrap();
        write_potential(&path, &pg).unwrap();
        assert_eq!(read_potential(&path).unwrap(), pg);
    }

    #[test]
    fn malformed_csv_reports_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        let p = solve_profile(1, 0.0, &RadialGrid::uniform(64, 1e-6).unwrap(), DEFAULT_TOL).unwrap();
        write_profile(&path, &p).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let mut lines: Vec<&str> = text.lines().collect();
        lines[2] = "0.5,oops,1,2";
        fs::write(&path, lines.join("\n")).unwrap();
        match read_profile(&path) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }
}
