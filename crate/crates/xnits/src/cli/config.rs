use std::path::PathBuf;

use crate::assembly::{AlphaMode, MethodConfig, Weighting};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseKind {
    Bar,
    BlockStrip,
    Inclusion,
    PoissonBc,
    CustomMeshFile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridChoice {
    Regular,
    Irregular,
    TriangularIrregular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionKind {
    Jump,
    Dirichlet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    OneD,
    TwoD,
}

/// One method entry of a study. `alpha` multiplies E_ref/h for fixed values.
#[derive(Debug, Clone, Copy)]
pub struct MethodSpec {
    pub kind: MethodKind,
    pub weighting: Weighting,
    pub alpha: AlphaSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodKind {
    Nitsche,
    Penalty,
    Lagrange,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaSpec {
    Auto,
    Mult(f64),
}

impl MethodSpec {
    /// Concrete assembly config for a given stabilization unit E_ref/h.
    pub fn to_config(&self, alpha_unit: f64) -> MethodConfig {
        match self.kind {
            MethodKind::Nitsche => MethodConfig::Nitsche {
                weighting: self.weighting,
                alpha: match self.alpha {
                    AlphaSpec::Auto => AlphaMode::Auto,
                    AlphaSpec::Mult(m) => AlphaMode::Fixed(m * alpha_unit),
                },
            },
            MethodKind::Penalty => MethodConfig::Penalty {
                alpha: match self.alpha {
                    AlphaSpec::Auto => alpha_unit,
                    AlphaSpec::Mult(m) => m * alpha_unit,
                },
            },
            MethodKind::Lagrange => MethodConfig::Lagrange,
        }
    }

    pub fn label(&self) -> String {
        let base = match (self.kind, self.weighting) {
            (MethodKind::Nitsche, Weighting::Classical) => "nitsche",
            (MethodKind::Nitsche, Weighting::Weighted) => "nitsche-weighted",
            (MethodKind::Penalty, _) => "penalty",
            (MethodKind::Lagrange, _) => "lagrange",
        };
        match self.alpha {
            AlphaSpec::Auto => base.to_string(),
            AlphaSpec::Mult(m) => format!("{base}(a={m})"),
        }
    }
}

/// Parsed study configuration (flat `key = value` text with `[section]`
/// headers; lists are comma-separated).
#[derive(Debug, Clone)]
pub struct StudyConfig {
    pub case: CaseKind,
    pub h_list: Vec<f64>,
    pub order: usize,
    pub grid: GridChoice,
    pub sweep: Option<Vec<f64>>,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub cut_fraction: f64,
    pub condition: ConditionKind,
    pub variant: Variant,
    pub epsilon: f64,
    pub gamma: f64,
    pub mesh_file: Option<PathBuf>,
    pub methods: Vec<MethodSpec>,
    pub quiet: bool,
    // custom-mesh-file extras
    pub ls_plane: Option<[f64; 4]>,
    pub ls_circle: Option<[f64; 3]>,
    pub e_plus: f64,
    pub nu_plus: f64,
    pub e_minus: f64,
    pub nu_minus: f64,
    pub i_bar: [f64; 2],
    pub j_bar: [f64; 2],
    pub g_plus: [f64; 2],
    pub g_minus: [f64; 2],
    pub dirichlet_tags: Vec<String>,
}

impl Default for StudyConfig {
    fn default() -> Self {
        StudyConfig {
            case: CaseKind::Bar,
            h_list: vec![1.0],
            order: 1,
            grid: GridChoice::Regular,
            sweep: None,
            out_dir: PathBuf::from("out"),
            seed: 42,
            cut_fraction: 0.5,
            condition: ConditionKind::Jump,
            variant: Variant::OneD,
            epsilon: 0.0,
            gamma: 0.1,
            mesh_file: None,
            methods: Vec::new(),
            quiet: false,
            ls_plane: None,
            ls_circle: None,
            e_plus: 1.0,
            nu_plus: 0.0,
            e_minus: 1.0,
            nu_minus: 0.0,
            i_bar: [0.0, 0.0],
            j_bar: [0.0, 0.0],
            g_plus: [0.0, 0.0],
            g_minus: [0.0, 0.0],
            dirichlet_tags: Vec::new(),
        }
    }
}

impl StudyConfig {
    pub fn h(&self) -> f64 {
        self.h_list[0]
    }

    /// Parse the config text. Section headers `[study]` and repeated
    /// `[method]` blocks; `#` starts a comment.
    pub fn parse(text: &str) -> Result<StudyConfig> {
        let mut cfg = StudyConfig::default();
        let mut section = String::from("study");
        let mut current_method: Option<MethodSpec> = None;
        let mut h_set = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            let at = lineno + 1;
            if line.is_empty() {
                continue;
            }
            if line.starts_with('[') {
                if !line.ends_with(']') {
                    return Err(cfg_err(at, "unterminated section header"));
                }
                if let Some(m) = current_method.take() {
                    cfg.methods.push(m);
                }
                section = line[1..line.len() - 1].trim().to_string();
                match section.as_str() {
                    "study" => {}
                    "method" => {
                        current_method = Some(MethodSpec {
                            kind: MethodKind::Nitsche,
                            weighting: Weighting::Classical,
                            alpha: AlphaSpec::Auto,
                        })
                    }
                    other => return Err(cfg_err(at, &format!("unknown section `{other}`"))),
                }
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(cfg_err(
                    at,
                    &format!("expected `key = value`, got `{line}`"),
                ));
            };
            let key = key.trim();
            let value = value.trim();
            match section.as_str() {
                "study" => parse_study_key(&mut cfg, key, value, at, &mut h_set)?,
                "method" => {
                    let m = current_method.as_mut().expect("inside a method section");
                    parse_method_key(m, key, value, at)?;
                }
                _ => unreachable!(),
            }
        }
        if let Some(m) = current_method.take() {
            cfg.methods.push(m);
        }
        if cfg.methods.is_empty() {
            cfg.methods.push(MethodSpec {
                kind: MethodKind::Nitsche,
                weighting: Weighting::Classical,
                alpha: AlphaSpec::Auto,
            });
        }
        if cfg.h_list.is_empty() {
            return Err(cfg_err(0, "empty h list"));
        }
        if cfg.h_list.iter().any(|&h| h <= 0.0) {
            return Err(cfg_err(0, "mesh sizes must be positive"));
        }
        if let Some(s) = &cfg.sweep {
            if s.iter().any(|&m| m <= 0.0) {
                return Err(cfg_err(0, "sweep multipliers must be positive"));
            }
        }
        Ok(cfg)
    }

    pub fn parse_file(path: &std::path::Path) -> Result<StudyConfig> {
        let text = std::fs::read_to_string(path)?;
        StudyConfig::parse(&text)
    }
}

fn cfg_err(line: usize, message: &str) -> Error {
    Error::Config {
        line,
        message: message.to_string(),
    }
}

fn parse_f64(value: &str, key: &str, at: usize) -> Result<f64> {
    value
        .parse()
        .map_err(|_| cfg_err(at, &format!("key `{key}`: bad number `{value}`")))
}

fn parse_list(value: &str, key: &str, at: usize) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(|t| parse_f64(t.trim(), key, at))
        .collect()
}

fn parse_study_key(
    cfg: &mut StudyConfig,
    key: &str,
    value: &str,
    at: usize,
    h_set: &mut bool,
) -> Result<()> {
    match key {
        "case" => {
            cfg.case = match value {
                "bar" => CaseKind::Bar,
                "block-strip" => CaseKind::BlockStrip,
                "inclusion" => CaseKind::Inclusion,
                "poisson-bc" => CaseKind::PoissonBc,
                "custom-mesh-file" => CaseKind::CustomMeshFile,
                _ => return Err(cfg_err(at, &format!("key `case`: unknown case `{value}`"))),
            }
        }
        "h" => {
            cfg.h_list = vec![parse_f64(value, key, at)?];
            *h_set = true;
        }
        "h_list" => {
            cfg.h_list = parse_list(value, key, at)?;
            *h_set = true;
        }
        "order" => {
            cfg.order = match value {
                "1" => 1,
                "2" => 2,
                _ => {
                    return Err(cfg_err(
                        at,
                        &format!("key `order`: must be 1 or 2, got `{value}`"),
                    ))
                }
            }
        }
        "grid" => {
            cfg.grid = match value {
                "regular" => GridChoice::Regular,
                "irregular" => GridChoice::Irregular,
                "triangular-irregular" => GridChoice::TriangularIrregular,
                _ => return Err(cfg_err(at, &format!("key `grid`: unknown grid `{value}`"))),
            }
        }
        "sweep" => cfg.sweep = Some(parse_list(value, key, at)?),
        "out" => cfg.out_dir = PathBuf::from(value),
        "seed" => {
            cfg.seed = value
                .parse()
                .map_err(|_| cfg_err(at, &format!("key `seed`: bad integer `{value}`")))?
        }
        "cut_fraction" => cfg.cut_fraction = parse_f64(value, key, at)?,
        "condition" => {
            cfg.condition = match value {
                "jump" => ConditionKind::Jump,
                "dirichlet" => ConditionKind::Dirichlet,
                _ => return Err(cfg_err(at, &format!("key `condition`: unknown `{value}`"))),
            }
        }
        "variant" => {
            cfg.variant = match value {
                "1d" => Variant::OneD,
                "2d" => Variant::TwoD,
                _ => return Err(cfg_err(at, "key `variant`: must be 1d or 2d")),
            }
        }
        "epsilon" => cfg.epsilon = parse_f64(value, key, at)?,
        "gamma" => cfg.gamma = parse_f64(value, key, at)?,
        "mesh_file" => cfg.mesh_file = Some(PathBuf::from(value)),
        "ls_plane" => {
            let v = parse_list(value, key, at)?;
            if v.len() != 4 {
                return Err(cfg_err(at, "key `ls_plane`: expected px, py, nx, ny"));
            }
            cfg.ls_plane = Some([v[0], v[1], v[2], v[3]]);
        }
        "ls_circle" => {
            let v = parse_list(value, key, at)?;
            if v.len() != 3 {
                return Err(cfg_err(at, "key `ls_circle`: expected cx, cy, r"));
            }
            cfg.ls_circle = Some([v[0], v[1], v[2]]);
        }
        "e_plus" => cfg.e_plus = parse_f64(value, key, at)?,
        "nu_plus" => cfg.nu_plus = parse_f64(value, key, at)?,
        "e_minus" => cfg.e_minus = parse_f64(value, key, at)?,
        "nu_minus" => cfg.nu_minus = parse_f64(value, key, at)?,
        "i_bar" | "j_bar" | "g_plus" | "g_minus" => {
            let v = parse_list(value, key, at)?;
            if v.is_empty() || v.len() > 2 {
                return Err(cfg_err(
                    at,
                    &format!("key `{key}`: expected one or two components"),
                ));
            }
            let pair = [v[0], *v.get(1).unwrap_or(&0.0)];
            match key {
                "i_bar" => cfg.i_bar = pair,
                "j_bar" => cfg.j_bar = pair,
                "g_plus" => cfg.g_plus = pair,
                _ => cfg.g_minus = pair,
            }
        }
        "dirichlet_tags" => {
            cfg.dirichlet_tags = value.split(',').map(|t| t.trim().to_string()).collect()
        }
        other => return Err(cfg_err(at, &format!("unknown key `{other}` in [study]"))),
    }
    Ok(())
}

fn parse_method_key(m: &mut MethodSpec, key: &str, value: &str, at: usize) -> Result<()> {
    match key {
        "kind" => {
            m.kind = match value {
                "nitsche" => MethodKind::Nitsche,
                "penalty" => MethodKind::Penalty,
                "lagrange" => MethodKind::Lagrange,
                _ => {
                    return Err(cfg_err(
                        at,
                        &format!("key `kind`: unknown method `{value}`"),
                    ))
                }
            }
        }
        "weighting" => {
            m.weighting = match value {
                "classical" => Weighting::Classical,
                "weighted" => Weighting::Weighted,
                _ => return Err(cfg_err(at, &format!("key `weighting`: unknown `{value}`"))),
            }
        }
        "alpha" => {
            m.alpha = if value == "auto" {
                AlphaSpec::Auto
            } else {
                let v = parse_f64(value, key, at)?;
                if v <= 0.0 {
                    return Err(cfg_err(at, "key `alpha`: multiplier must be positive"));
                }
                AlphaSpec::Mult(v)
            }
        }
        other => return Err(cfg_err(at, &format!("unknown key `{other}` in [method]"))),
    }
    Ok(())
}
