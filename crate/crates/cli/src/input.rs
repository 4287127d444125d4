use std::fs;
use std::path::Path;

use heightdyn::builtins::Builtin;
use heightdyn::dynamics::{AffineAutomorphism, ExclusionSet};
use heightdyn::k3::{self, SurfacePoint, WehlerSurface};
use heightdyn::parse::{parse_forms, parse_map};
use heightdyn::{BigRat, ProjPoint, RationalMap};

use crate::args::{AutInput, Common, MapInput, SurfaceInput};

/// A problem with the command line or an input file (exit code 2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub type Usage<T> = Result<T, UsageError>;

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

fn read(path: &Path) -> Usage<String> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

/// Blanks out `#` comments, keeping byte offsets so syntax errors point at
/// the right place.
fn strip_comments(text: &str) -> String {
    text.lines()
        .map(|line| match line.find('#') {
            Some(i) => format!("{}{}", &line[..i], " ".repeat(line.len() - i)),
            None => line.to_string(),
        })
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn builtin(common: &Common) -> Usage<Option<Builtin>> {
    common
        .builtin
        .as_deref()
        .map(|name| name.parse::<Builtin>().map_err(|e| usage(e.to_string())))
        .transpose()
}

fn map_from_file(path: &Path) -> Usage<RationalMap> {
    let text = strip_comments(&read(path)?);
    parse_map(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

pub struct LoadedMap {
    pub map: RationalMap,
    pub builtin: Option<Builtin>,
    pub exclusion: ExclusionSet,
}

pub fn load_map(common: &Common, input: &MapInput) -> Usage<LoadedMap> {
    let b = builtin(common)?;
    let (map, default_exclusion) = match (b, &input.map_file) {
        (Some(_), Some(_)) => return Err(usage("give either a map file or --builtin, not both")),
        (None, None) => return Err(usage("a map file or --builtin is required")),
        (Some(b), None) => (b.map(), b.exclusion()),
        (None, Some(path)) => (map_from_file(path)?, ExclusionSet::everything()),
    };
    let exclusion = match &common.exclude {
        Some(text) => exclusion_from(text, map.n() + 1)?,
        None => default_exclusion,
    };
    Ok(LoadedMap {
        map,
        builtin: b,
        exclusion,
    })
}

pub fn exclusion_from(text: &str, nvars: usize) -> Usage<ExclusionSet> {
    let forms = parse_forms(text, nvars).map_err(|e| usage(format!("--exclude: {e}")))?;
    ExclusionSet::new(forms).map_err(|e| usage(format!("--exclude: {e}")))
}

pub fn load_automorphism(common: &Common, input: &AutInput) -> Usage<AffineAutomorphism> {
    if let Some(b) = builtin(common)? {
        if input.map_file.is_some() || input.inverse.is_some() {
            return Err(usage("give either map files or --builtin, not both"));
        }
        return b
            .automorphism()
            .ok_or_else(|| usage(format!("builtin '{b}' is not an affine automorphism")));
    }
    let fwd = map_from_file(
        input
            .map_file
            .as_deref()
            .ok_or_else(|| usage("a forward map file or --builtin is required"))?,
    )?;
    let inv = map_from_file(
        input
            .inverse
            .as_deref()
            .ok_or_else(|| usage("--inverse is required with a map file"))?,
    )?;
    let dims = match input.dims.as_deref() {
        None => None,
        Some([a, b]) => Some((*a, *b)),
        Some(_) => return Err(usage("--dims takes exactly two values, e.g. 0,0")),
    };
    AffineAutomorphism::new(fwd, inv, dims, common.seed).map_err(|e| usage(e.to_string()))
}

/// Parses `1,2,3`, `1 2 3` or `[1, 2, 3]`; entries may be rationals `p/q`.
pub fn parse_point(text: &str) -> Usage<ProjPoint> {
    let cleaned = text.trim().trim_start_matches('[').trim_end_matches(']');
    let coords = cleaned
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<BigRat>()
                .map_err(|_| usage(format!("bad coordinate '{s}' in point '{text}'")))
        })
        .collect::<Usage<Vec<_>>>()?;
    ProjPoint::normalize(&coords).map_err(|e| usage(format!("point '{text}': {e}")))
}

pub fn point_for(map: &RationalMap, text: &str) -> Usage<ProjPoint> {
    let p = parse_point(text)?;
    if p.dim() != map.n() {
        return Err(usage(format!(
            "point {p} lives in P^{} but the map acts on P^{}",
            p.dim(),
            map.n()
        )));
    }
    Ok(p)
}

pub fn load_surface(input: &SurfaceInput) -> Usage<(WehlerSurface, SurfacePoint)> {
    match &input.surface_file {
        None => Ok(k3::default_surface()),
        Some(path) => {
            let (v, p) = k3::parse_surface(&read(path)?)
                .map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let p = p.ok_or_else(|| usage(format!("{}: the file has no point", path.display())))?;
            Ok((v, p))
        }
    }
}

/// Parses `x0 x1 x2; y0 y1 y2`.
pub fn parse_base_point(text: &str) -> Usage<(ProjPoint, ProjPoint)> {
    let parts: Vec<&str> = text.split(';').collect();
    if parts.len() != 2 {
        return Err(usage("base point must look like 'x0 x1 x2; y0 y1 y2'"));
    }
    let x = parse_point(parts[0])?;
    let y = parse_point(parts[1])?;
    if x.dim() != 2 || y.dim() != 2 {
        return Err(usage("both halves of the base point need 3 coordinates"));
    }
    Ok((x, y))
}
