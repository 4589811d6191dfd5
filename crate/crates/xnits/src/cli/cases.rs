use crate::assembly::{
    assemble_bulk, assemble_lagrange, assemble_loads, assemble_nitsche_dirichlet,
    assemble_nitsche_jump, assemble_penalty, constant_field, InterfaceCondition, MethodConfig,
    Model, NeumannLoad, VecField,
};
use crate::cli::config::{CaseKind, ConditionKind, GridChoice, StudyConfig, Variant};
use crate::enrichment::{build_dof_map, EnrichedDofMap};
use crate::error::{Error, Result};
use crate::geometry::{
    build_structured_mesh, classify_and_cut, read_mesh_text, CutDecomposition, Domain, GridKind,
    LevelSetShape, Mesh, Space,
};
use crate::physics::{BimaterialAssignment, Material};
use crate::solve::{condition_number, solve_auto, Solution, DENSE_LIMIT};
use crate::verify::{BarField, ExactField, InclusionExact, StripField};

/// Everything a single solve needs, built from a study config and one mesh
/// size.
pub struct CaseSetup {
    pub mesh: Mesh,
    pub space: Space,
    pub shape: LevelSetShape,
    pub cut: CutDecomposition,
    pub dofs: EnrichedDofMap,
    pub materials: BimaterialAssignment,
    pub condition: InterfaceCondition,
    pub body_force: Option<VecField>,
    pub neumann: Vec<NeumannLoad>,
    /// strong outer Dirichlet dofs with values
    pub constraints: Vec<(usize, f64)>,
    pub exact: Option<Box<dyn ExactField>>,
    /// E_ref/h, the unit that fixed-alpha multipliers scale
    pub alpha_unit: f64,
    pub h: f64,
}

impl CaseSetup {
    pub fn model(&self) -> Model<'_> {
        Model {
            mesh: &self.mesh,
            space: &self.space,
            shape: &self.shape,
            cut: &self.cut,
            dofs: &self.dofs,
            materials: &self.materials,
        }
    }
}

/// Outcome of one (case, method) solve.
pub struct CaseRun {
    pub solution: Solution,
    pub n_dofs: usize,
    pub extra_dofs: usize,
    pub condition_number: Option<f64>,
}

fn grid_kind(cfg: &StudyConfig) -> GridKind {
    match cfg.grid {
        GridChoice::Regular => GridKind::TriangleRegular,
        GridChoice::Irregular | GridChoice::TriangularIrregular => {
            GridKind::TriangleIrregular { seed: cfg.seed }
        }
    }
}

/// Build the case geometry, spaces, data and oracle for one mesh size.
pub fn build_case(cfg: &StudyConfig, h: f64) -> Result<CaseSetup> {
    match cfg.case {
        CaseKind::Bar => build_bar(cfg, h, 1.0, 3.0 * h, 1.0),
        CaseKind::BlockStrip => match cfg.variant {
            Variant::OneD => build_bar(cfg, h, 205e3, 25.0, 1.5e-6),
            Variant::TwoD => build_strip(cfg, h),
        },
        CaseKind::Inclusion => build_inclusion(cfg, h),
        CaseKind::CustomMeshFile => build_custom(cfg, h),
        CaseKind::PoissonBc => Err(Error::Assembly(
            "poisson-bc runs through its own pipeline".into(),
        )),
    }
}

/// The clamped bar with an interface inside the middle element at
/// cut_fraction of its length; jump or two-sided Dirichlet data of size g.
fn build_bar(cfg: &StudyConfig, h: f64, e_mod: f64, length: f64, g: f64) -> Result<CaseSetup> {
    let mesh = build_structured_mesh(Domain::interval(0.0, length), h, GridKind::Segment)?;
    let n_el = mesh.elements.len();
    let h_act = length / n_el as f64;
    let mid = n_el / 2;
    let x_gamma = mid as f64 * h_act + cfg.cut_fraction * h_act;
    let shape = LevelSetShape::plane([x_gamma, 0.0], [1.0, 0.0])?;
    let cut = classify_and_cut(&mesh, &shape)?;
    let space = Space::new(&mesh, cfg.order)?;
    let dofs = build_dof_map(&space, &cut, &shape, 1)?;
    let materials = BimaterialAssignment::uniform(Material::bar(e_mod)?);
    let condition = match cfg.condition {
        ConditionKind::Jump => InterfaceCondition::Jump {
            i_bar: constant_field([2.0 * g, 0.0]),
            j_bar: constant_field([0.0, 0.0]),
        },
        ConditionKind::Dirichlet => InterfaceCondition::DirichletTwoSided {
            g_plus: constant_field([g, 0.0]),
            g_minus: constant_field([-g, 0.0]),
        },
    };
    let last = mesh.node_coords.len() - 1;
    let constraints = vec![
        (dofs.classical_dof(0, 0), 0.0),
        (dofs.classical_dof(last, 0), 0.0),
    ];
    // the Dirichlet variant shares the bar solution only for the symmetric cut
    let exact: Option<Box<dyn ExactField>> =
        if cfg.condition == ConditionKind::Jump || (cfg.cut_fraction - 0.5).abs() < 1e-12 {
            Some(Box::new(BarField {
                g,
                h_len: length,
                e_mod,
            }))
        } else {
            None
        };
    Ok(CaseSetup {
        alpha_unit: e_mod / h_act,
        h: h_act,
        mesh,
        space,
        shape,
        cut,
        dofs,
        materials,
        condition,
        body_force: None,
        neumann: Vec::new(),
        constraints,
        exact,
    })
}

/// Plane-strain strip [0,5] x [0,25] with a horizontal interface at
/// z = 12.5, clamped in z at both ends and in x along the left edge.
fn build_strip(cfg: &StudyConfig, h: f64) -> Result<CaseSetup> {
    let (e_mod, nu, length, g) = (205e3, 0.3, 25.0, 1.5e-6);
    let mesh = build_structured_mesh(Domain::rect([0.0, 0.0], [5.0, length]), h, grid_kind(cfg))?;
    let shape = LevelSetShape::plane([0.0, length / 2.0], [0.0, 1.0])?;
    let cut = classify_and_cut(&mesh, &shape)?;
    if cut.cut_elements.is_empty() {
        return Err(Error::Geometry(
            "strip interface landed on mesh lines; pick h so 12.5 is element-interior".into(),
        ));
    }
    let space = Space::new(&mesh, cfg.order)?;
    let dofs = build_dof_map(&space, &cut, &shape, 2)?;
    let materials = BimaterialAssignment::uniform(Material::plane_strain(e_mod, nu)?);
    let condition = match cfg.condition {
        ConditionKind::Jump => InterfaceCondition::Jump {
            i_bar: constant_field([0.0, 2.0 * g]),
            j_bar: constant_field([0.0, 0.0]),
        },
        ConditionKind::Dirichlet => {
            let strip = StripField { g, length, nu };
            let up = move |p: [f64; 2]| strip.displacement(p, crate::geometry::Side::Plus);
            let strip2 = StripField { g, length, nu };
            let um = move |p: [f64; 2]| strip2.displacement(p, crate::geometry::Side::Minus);
            InterfaceCondition::DirichletTwoSided {
                g_plus: Box::new(up),
                g_minus: Box::new(um),
            }
        }
    };
    let mut constraints = Vec::new();
    for tag in ["bottom", "top"] {
        for n in space.tagged_nodes(&mesh, tag) {
            constraints.push((dofs.classical_dof(n, 1), 0.0));
        }
    }
    for n in space.tagged_nodes(&mesh, "left") {
        constraints.push((dofs.classical_dof(n, 0), 0.0));
    }
    Ok(CaseSetup {
        alpha_unit: e_mod / mesh.mesh_size(),
        h: mesh.mesh_size(),
        mesh,
        space,
        shape,
        cut,
        dofs,
        materials,
        condition,
        body_force: None,
        neumann: Vec::new(),
        constraints,
        exact: Some(Box::new(StripField { g, length, nu })),
    })
}

/// Circular inclusion benchmark on the square [-1,1]^2: exact tractions on
/// the outer boundary, four point pins against rigid motion, zero jump data
/// across the material circle.
fn build_inclusion(cfg: &StudyConfig, h: f64) -> Result<CaseSetup> {
    let (a, b) = (0.4, 2.0);
    let inner = Material::plane_strain(1.0, 0.25)?;
    let outer = Material::plane_strain(10.0, 0.3)?;
    let exact = InclusionExact::new(a, b, inner, outer)?;
    let mesh = build_structured_mesh(Domain::rect([-1.0, -1.0], [1.0, 1.0]), h, grid_kind(cfg))?;
    let shape = LevelSetShape::circle([0.0, 0.0], a)?;
    let cut = classify_and_cut(&mesh, &shape)?;
    let space = Space::new(&mesh, cfg.order)?;
    let dofs = build_dof_map(&space, &cut, &shape, 2)?;
    let materials = BimaterialAssignment {
        plus: outer,
        minus: inner,
    };
    let condition = InterfaceCondition::Jump {
        i_bar: constant_field([0.0, 0.0]),
        j_bar: constant_field([0.0, 0.0]),
    };
    let mut neumann = Vec::new();
    for (tag, normal) in [
        ("bottom", [0.0, -1.0]),
        ("top", [0.0, 1.0]),
        ("left", [-1.0, 0.0]),
        ("right", [1.0, 0.0]),
    ] {
        let ex = exact;
        let traction = move |p: [f64; 2]| -> [f64; 2] {
            let s = ex.stress_voigt(p, crate::geometry::Side::Plus);
            [
                s[0] * normal[0] + s[2] * normal[1],
                s[2] * normal[0] + s[1] * normal[1],
            ]
        };
        neumann.push(NeumannLoad {
            tag: tag.to_string(),
            traction: Box::new(traction),
        });
    }
    // pins against rigid motion: u_x near (0, +-1), u_y near (+-1, 0).
    // Each pin is set to the exact displacement of the node it lands on, so
    // grids whose nodes miss the nominal points stay consistent.
    let mut constraints = Vec::new();
    let mut pin = |target: [f64; 2], comp: usize| {
        let node = nearest_node(&mesh, target);
        let p = mesh.node_coords[node];
        let ex_u = exact.displacement(p, crate::geometry::Side::Plus);
        constraints.push((dofs.classical_dof(node, comp), ex_u[comp]));
    };
    pin([0.0, 1.0], 0);
    pin([0.0, -1.0], 0);
    pin([1.0, 0.0], 1);
    pin([-1.0, 0.0], 1);
    Ok(CaseSetup {
        alpha_unit: outer.e_mod / mesh.mesh_size(),
        h: mesh.mesh_size(),
        mesh,
        space,
        shape,
        cut,
        dofs,
        materials,
        condition,
        body_force: None,
        neumann,
        constraints,
        exact: Some(Box::new(exact)),
    })
}

fn nearest_node(mesh: &Mesh, p: [f64; 2]) -> usize {
    let mut best = 0;
    let mut dist = f64::INFINITY;
    for (i, q) in mesh.node_coords.iter().enumerate() {
        let d = (q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2);
        if d < dist {
            dist = d;
            best = i;
        }
    }
    best
}

/// User-provided mesh with a configured level set, constant interface data
/// and zero-pinned tagged boundaries. No oracle.
fn build_custom(cfg: &StudyConfig, _h: f64) -> Result<CaseSetup> {
    let path = cfg.mesh_file.as_ref().ok_or_else(|| Error::Config {
        line: 0,
        message: "custom case needs mesh_file".into(),
    })?;
    let mesh = read_mesh_text(path)?;
    let shape = if let Some([cx, cy, r]) = cfg.ls_circle {
        LevelSetShape::circle([cx, cy], r)?
    } else if let Some([px, py, nx, ny]) = cfg.ls_plane {
        LevelSetShape::plane([px, py], [nx, ny])?
    } else {
        return Err(Error::Config {
            line: 0,
            message: "custom case needs ls_circle or ls_plane".into(),
        });
    };
    let cut = classify_and_cut(&mesh, &shape)?;
    let space = Space::new(&mesh, cfg.order)?;
    let components = mesh.dimension.min(2);
    let dofs = build_dof_map(&space, &cut, &shape, components)?;
    let materials = if mesh.dimension == 1 {
        BimaterialAssignment {
            plus: Material::bar(cfg.e_plus)?,
            minus: Material::bar(cfg.e_minus)?,
        }
    } else {
        BimaterialAssignment {
            plus: Material::plane_strain(cfg.e_plus, cfg.nu_plus)?,
            minus: Material::plane_strain(cfg.e_minus, cfg.nu_minus)?,
        }
    };
    let condition = match cfg.condition {
        ConditionKind::Jump => InterfaceCondition::Jump {
            i_bar: constant_field(cfg.i_bar),
            j_bar: constant_field(cfg.j_bar),
        },
        ConditionKind::Dirichlet => InterfaceCondition::DirichletTwoSided {
            g_plus: constant_field(cfg.g_plus),
            g_minus: constant_field(cfg.g_minus),
        },
    };
    let mut constraints = Vec::new();
    for tag in &cfg.dirichlet_tags {
        for n in space.tagged_nodes(&mesh, tag) {
            for comp in 0..components {
                constraints.push((dofs.classical_dof(n, comp), 0.0));
            }
        }
    }
    let e_ref = cfg.e_plus.max(cfg.e_minus);
    Ok(CaseSetup {
        alpha_unit: e_ref / mesh.mesh_size(),
        h: mesh.mesh_size(),
        mesh,
        space,
        shape,
        cut,
        dofs,
        materials,
        condition,
        body_force: None,
        neumann: Vec::new(),
        constraints,
        exact: None,
    })
}

/// Assemble and solve one case with one method.
pub fn solve_case(setup: &CaseSetup, mcfg: &MethodConfig, want_kappa: bool) -> Result<CaseRun> {
    let model = setup.model();
    let mut sys = model.new_system();
    assemble_bulk(&model, &mut sys);
    match mcfg {
        MethodConfig::Nitsche { .. } => match &setup.condition {
            InterfaceCondition::Jump { .. } => {
                assemble_nitsche_jump(&model, &setup.condition, mcfg, &mut sys)?
            }
            InterfaceCondition::DirichletTwoSided { .. } => {
                assemble_nitsche_dirichlet(&model, &setup.condition, mcfg, &mut sys)?
            }
        },
        MethodConfig::Penalty { alpha } => {
            assemble_penalty(&model, &setup.condition, *alpha, &mut sys)?
        }
        MethodConfig::Lagrange => assemble_lagrange(&model, &setup.condition, &mut sys)?,
    }
    assemble_loads(&model, setup.body_force.as_ref(), &setup.neumann, &mut sys);
    for &(dof, v) in &setup.constraints {
        sys.constrain(dof, v);
    }
    let solution = solve_auto(&sys)?;
    let kappa = if want_kappa && !sys.is_saddle() && sys.n_total() <= DENSE_LIMIT {
        condition_number(&sys.reduce_dense().matrix).ok()
    } else {
        None
    };
    Ok(CaseRun {
        solution,
        n_dofs: setup.dofs.n_dofs,
        extra_dofs: sys.n_multipliers,
        condition_number: kappa,
    })
}
