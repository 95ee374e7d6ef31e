//! Line-oriented scenario files.
//!
//! One stanza per line, `#` starts a comment:
//!
//! ```text
//! domain 0 0.22 0 0.22 0 0.22
//! subdivisions 3 3 3
//! region box=0,0,0:0.22,0.22,0.22 sigma=0 eps_r=5 mu_r=1
//! dirichlet phi zmin 0
//! dirichlet phi zmax 1
//! dirichlet a all
//! source none
//! methods original,tree-cotree,lagrange
//! required tree-cotree
//! ```
//!
//! `region` and `dirichlet` repeat; later regions win where they overlap.
//! With `source manufactured sigma=<S/m>` the domain defaults to the
//! manufactured cube, the material comes from the source and all
//! boundaries default to homogeneous Dirichlet.

use std::fmt;

use lfmaxwell::assembly::Material;
use lfmaxwell::mesh::{AxisBox, BoundaryLabel};
use lfmaxwell::physics::manufactured::ManufacturedCase;
use lfmaxwell::physics::{Method, Scenario, Source};
use lfmaxwell::spaces::DirichletSpec;
use lfmaxwell::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    /// 1-based line, `None` for whole-file problems.
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

fn at(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError {
        line: Some(line),
        message: message.into(),
    }
}

/// A parsed scenario file.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub methods: Vec<Method>,
    /// Methods whose singularity is an error rather than an observation.
    pub required: Vec<Method>,
}

impl ScenarioConfig {
    /// Same scenario on a cube mesh with `s_h` cells per axis.
    pub fn with_subdivisions(&self, s_h: usize) -> Scenario {
        Scenario {
            subdivisions: [s_h; 3],
            ..self.scenario.clone()
        }
    }
}

fn number(line: usize, s: &str) -> Result<f64, ConfigError> {
    let v: f64 = s
        .parse()
        .map_err(|_| at(line, format!("expected a number, found `{s}`")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(at(line, format!("`{s}` is not finite")))
    }
}

fn point(line: usize, s: &str) -> Result<[f64; 3], ConfigError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(at(line, format!("expected x,y,z, found `{s}`")));
    }
    Ok([number(line, parts[0])?, number(line, parts[1])?, number(line, parts[2])?])
}

fn labels(line: usize, words: &[&str]) -> Result<Vec<BoundaryLabel>, ConfigError> {
    let mut out = Vec::new();
    for w in words {
        if w.eq_ignore_ascii_case("all") {
            out.extend(BoundaryLabel::ALL);
        } else {
            out.push(w.parse().map_err(|e: lfmaxwell::Error| at(line, e.to_string()))?);
        }
    }
    if out.is_empty() {
        return Err(at(line, "expected at least one boundary label"));
    }
    out.sort();
    out.dedup();
    Ok(out)
}

pub fn parse_methods(s: &str) -> Result<Vec<Method>, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let m: Method = part.parse().map_err(|e: lfmaxwell::Error| e.to_string())?;
        if !out.contains(&m) {
            out.push(m);
        }
    }
    if out.is_empty() {
        return Err("empty method list".into());
    }
    Ok(out)
}

/// `key=value` options after the stanza keyword.
fn options<'a>(line: usize, words: &[&'a str], allowed: &[&str]) -> Result<Vec<(&'a str, &'a str)>, ConfigError> {
    let mut out: Vec<(&str, &str)> = Vec::new();
    for w in words {
        let (k, v) = w
            .split_once('=')
            .ok_or_else(|| at(line, format!("expected key=value, found `{w}`")))?;
        if !allowed.contains(&k) {
            return Err(at(line, format!("unknown option `{k}` (expected one of {})", allowed.join(", "))));
        }
        if out.iter().any(|(seen, _)| *seen == k) {
            return Err(at(line, format!("option `{k}` given twice")));
        }
        out.push((k, v));
    }
    Ok(out)
}

fn option(opts: &[(&str, &str)], key: &str) -> Option<String> {
    opts.iter().find(|(k, _)| *k == key).map(|(_, v)| v.to_string())
}

pub fn parse_scenario(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let mut domain: Option<[[f64; 2]; 3]> = None;
    let mut subdivisions: Option<[usize; 3]> = None;
    let mut zones: Vec<(AxisBox, Material)> = Vec::new();
    let mut scalar: Vec<(BoundaryLabel, Complex64)> = Vec::new();
    let mut edge: Vec<BoundaryLabel> = Vec::new();
    let mut source: Option<(usize, Source)> = None;
    let mut methods: Option<Vec<Method>> = None;
    let mut required: Vec<Method> = Vec::new();
    let mut saw_dirichlet = false;
    let mut first_region_line = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let words: Vec<&str> = content.split_whitespace().collect();
        let (key, rest) = (words[0], &words[1..]);
        match key {
            "domain" => {
                if domain.is_some() {
                    return Err(at(line, "`domain` given twice"));
                }
                if rest.len() != 6 {
                    return Err(at(line, "domain needs xmin xmax ymin ymax zmin zmax"));
                }
                let v: Vec<f64> = rest.iter().map(|w| number(line, w)).collect::<Result<_, _>>()?;
                let d = [[v[0], v[1]], [v[2], v[3]], [v[4], v[5]]];
                if d.iter().any(|r| r[1] <= r[0]) {
                    return Err(at(line, "every domain range needs min < max"));
                }
                domain = Some(d);
            }
            "subdivisions" => {
                if subdivisions.is_some() {
                    return Err(at(line, "`subdivisions` given twice"));
                }
                let n: Vec<usize> = rest
                    .iter()
                    .map(|w| w.parse().map_err(|_| at(line, format!("expected a cell count, found `{w}`"))))
                    .collect::<Result<_, _>>()?;
                let n = match n.as_slice() {
                    [s] => [*s; 3],
                    [a, b, c] => [*a, *b, *c],
                    _ => return Err(at(line, "subdivisions needs one or three counts")),
                };
                if n.contains(&0) {
                    return Err(at(line, "subdivisions must be positive"));
                }
                subdivisions = Some(n);
            }
            "region" => {
                let opts = options(line, rest, &["box", "sigma", "eps_r", "mu_r"])?;
                let spec = option(&opts, "box").ok_or_else(|| at(line, "region needs box=x0,y0,z0:x1,y1,z1"))?;
                let (lo, hi) = spec
                    .split_once(':')
                    .ok_or_else(|| at(line, format!("expected x0,y0,z0:x1,y1,z1, found `{spec}`")))?;
                let (lo, hi) = (point(line, lo)?, point(line, hi)?);
                if (0..3).any(|d| hi[d] < lo[d]) {
                    return Err(at(line, "region box needs min <= max on every axis"));
                }
                let get = |k: &str, default: f64| option(&opts, k).map_or(Ok(default), |v| number(line, &v));
                let (sigma, eps_r, mu_r) = (get("sigma", 0.0)?, get("eps_r", 1.0)?, get("mu_r", 1.0)?);
                if sigma < 0.0 || eps_r <= 0.0 || mu_r <= 0.0 {
                    return Err(at(line, "need sigma >= 0, eps_r > 0 and mu_r > 0"));
                }
                first_region_line.get_or_insert(line);
                zones.push((AxisBox::new(lo, hi), Material::relative(sigma, eps_r, mu_r)));
            }
            "dirichlet" => {
                saw_dirichlet = true;
                match rest.first().copied() {
                    Some("phi") => {
                        if rest.len() != 3 {
                            return Err(at(line, "expected `dirichlet phi <label> <value>`"));
                        }
                        let value = number(line, rest[2])?;
                        for l in labels(line, &rest[1..2])? {
                            scalar.push((l, Complex64::new(value, 0.0)));
                        }
                    }
                    Some("a") => {
                        for l in labels(line, &rest[1..])? {
                            if !edge.contains(&l) {
                                edge.push(l);
                            }
                        }
                    }
                    _ => return Err(at(line, "expected `dirichlet phi ...` or `dirichlet a ...`")),
                }
            }
            "source" => {
                if source.is_some() {
                    return Err(at(line, "`source` given twice"));
                }
                let s = match rest.first().copied() {
                    Some("none") if rest.len() == 1 => Source::None,
                    Some("manufactured") => {
                        let opts = options(line, &rest[1..], &["sigma"])?;
                        let sigma = option(&opts, "sigma").map_or(Ok(0.0), |v| number(line, &v))?;
                        if sigma < 0.0 {
                            return Err(at(line, "sigma must be >= 0"));
                        }
                        Source::Manufactured(ManufacturedCase::vacuum(sigma))
                    }
                    _ => return Err(at(line, "expected `source none` or `source manufactured sigma=<value>`")),
                };
                source = Some((line, s));
            }
            "methods" => {
                methods = Some(parse_methods(&rest.join(",")).map_err(|e| at(line, e))?);
            }
            "required" => {
                for m in parse_methods(&rest.join(",")).map_err(|e| at(line, e))? {
                    if !required.contains(&m) {
                        required.push(m);
                    }
                }
            }
            other => return Err(at(line, format!("unknown key `{other}`"))),
        }
    }

    let missing = |what: &str| ConfigError {
        line: None,
        message: format!("missing required `{what}`"),
    };
    let subdivisions = subdivisions.ok_or_else(|| missing("subdivisions"))?;
    let source = source.map_or(Source::None, |(_, s)| s);
    let scenario = match source {
        Source::None => {
            if zones.is_empty() {
                return Err(missing("region"));
            }
            Scenario {
                extents: domain.ok_or_else(|| missing("domain"))?,
                subdivisions,
                zones,
                dirichlet: DirichletSpec { scalar, edge },
                source,
            }
        }
        Source::Manufactured(case) => {
            if let Some(line) = first_region_line {
                return Err(at(line, "regions are fixed by the manufactured source"));
            }
            let extents = ManufacturedCase::extents();
            if domain.is_some_and(|d| d != extents) {
                return Err(missing_domain_note());
            }
            let mut s = Scenario::manufactured(1, case.material.sigma);
            s.subdivisions = subdivisions;
            if saw_dirichlet {
                s.dirichlet = DirichletSpec { scalar, edge };
            }
            s
        }
    };
    let methods = methods.unwrap_or_else(|| Method::ALL.to_vec());
    Ok(ScenarioConfig {
        scenario,
        methods,
        required,
    })
}

fn missing_domain_note() -> ConfigError {
    ConfigError {
        line: None,
        message: "the manufactured solution lives on (pi/2, 3pi/2)^3; omit `domain`".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_air_cube() {
        let c = parse_scenario("domain 0 1 0 1 0 1\nsubdivisions 2\nregion box=0,0,0:1,1,1\n").unwrap();
        assert_eq!(c.scenario.subdivisions, [2, 2, 2]);
        assert_eq!(c.scenario.zones.len(), 1);
        assert_eq!(c.scenario.zones[0].1.sigma, 0.0);
        assert_eq!(c.methods, Method::ALL.to_vec());
        assert!(c.scenario.dirichlet.edge.is_empty());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_scenario("domain 0 1 0 1 0 1\n\n# comment\nfrobnicate 3\n").unwrap_err();
        assert_eq!(e.line, Some(4));
        assert!(e.to_string().starts_with("line 4: unknown key"));
        let e = parse_scenario("domain 0 1 0 1 0 1\nsubdivisions 2\nregion box=0,0,0:1,1,1 colour=red\n").unwrap_err();
        assert_eq!(e.line, Some(3));
        let e = parse_scenario("subdivisions 2\ndirichlet phi top 1\n").unwrap_err();
        assert_eq!(e.line, Some(2));
        assert!(e.message.contains("top"));
    }

    #[test]
    fn missing_fields_are_reported() {
        assert!(parse_scenario("domain 0 1 0 1 0 1\nregion box=0,0,0:1,1,1\n")
            .unwrap_err()
            .message
            .contains("subdivisions"));
        assert!(parse_scenario("subdivisions 2\nregion box=0,0,0:1,1,1\n")
            .unwrap_err()
            .message
            .contains("domain"));
        assert!(parse_scenario("domain 0 1 0 1 0 1\nsubdivisions 2\n")
            .unwrap_err()
            .message
            .contains("region"));
    }

    #[test]
    fn manufactured_defaults() {
        let c = parse_scenario("subdivisions 4\nsource manufactured sigma=6e7\nmethods tree-cotree, original\n").unwrap();
        assert_eq!(c.scenario, {
            let mut s = Scenario::manufactured(4, 6e7);
            s.subdivisions = [4; 3];
            s
        });
        assert_eq!(c.methods, vec![Method::TreeCotree, Method::Original]);
        assert!(parse_scenario("subdivisions 4\nsource manufactured\nregion box=0,0,0:1,1,1\n").is_err());
    }

    #[test]
    fn later_labels_and_all() {
        let c = parse_scenario(
            "domain 0 1 0 1 0 1\nsubdivisions 1\nregion box=0,0,0:1,1,1\ndirichlet a all\ndirichlet a xmin\nrequired lm\n",
        )
        .unwrap();
        assert_eq!(c.scenario.dirichlet.edge, BoundaryLabel::ALL.to_vec());
        assert_eq!(c.required, vec![Method::Lagrange]);
    }
}
