use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{Dataset, RngHandle, Role};
use crate::error::{Error, Result};

/// Environment parameters, e.g. `s_e` or `p`.
pub type Env = BTreeMap<String, f64>;

/// Structural equation: `(parent values, noise draw, environment) -> value`.
pub type Mechanism = Arc<dyn Fn(&[f64], f64, &Env) -> f64 + Send + Sync>;

/// Exogenous noise attached to a node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Noise {
    Gaussian {
        mean: f64,
        sd: f64,
    },
    Bernoulli {
        q: f64,
    },
    /// ±1 with equal probability.
    Rademacher,
    /// Uniform on [0, 1); lets mechanisms implement environment-dependent flips.
    Uniform,
    None,
}

impl Noise {
    pub fn gaussian(mean: f64, sd: f64) -> Self {
        Noise::Gaussian { mean, sd }
    }

    fn validate(&self, node: &str) -> Result<()> {
        match *self {
            Noise::Gaussian { mean, sd } if !(sd >= 0.0 && sd.is_finite() && mean.is_finite()) => {
                Err(Error::config(format!(
                    "node `{node}`: invalid gaussian noise ({mean}, {sd})"
                )))
            }
            Noise::Bernoulli { q } if !(0.0..=1.0).contains(&q) => Err(Error::config(format!(
                "node `{node}`: bernoulli q = {q} outside [0, 1]"
            ))),
            _ => Ok(()),
        }
    }

    fn draw<R: Rng>(&self, rng: &mut R) -> f64 {
        match *self {
            Noise::Gaussian { mean, sd } => {
                let z: f64 = StandardNormal.sample(rng);
                mean + sd * z
            }
            Noise::Bernoulli { q } => {
                if rng.random::<f64>() < q {
                    1.0
                } else {
                    0.0
                }
            }
            Noise::Rademacher => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            Noise::Uniform => rng.random::<f64>(),
            Noise::None => 0.0,
        }
    }
}

/// One structural equation of an SCM.
#[derive(Clone)]
pub struct NodeDef {
    pub name: String,
    pub parents: Vec<String>,
    /// Environment parameters the mechanism reads.
    pub env_params: Vec<String>,
    pub noise: Noise,
    pub mechanism: Mechanism,
    pub role: Option<Role>,
}

impl fmt::Debug for NodeDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NodeDef")
            .field("name", &self.name)
            .field("parents", &self.parents)
            .field("env_params", &self.env_params)
            .field("noise", &self.noise)
            .field("role", &self.role)
            .finish_non_exhaustive()
    }
}

impl NodeDef {
    /// A root node whose value is its noise draw.
    pub fn exogenous(name: impl Into<String>, noise: Noise) -> Self {
        Self {
            name: name.into(),
            parents: Vec::new(),
            env_params: Vec::new(),
            noise,
            mechanism: Arc::new(|_, u, _| u),
            role: None,
        }
    }

    pub fn new<F>(name: impl Into<String>, parents: &[&str], noise: Noise, mechanism: F) -> Self
    where
        F: Fn(&[f64], f64, &Env) -> f64 + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            parents: parents.iter().map(|p| p.to_string()).collect(),
            env_params: Vec::new(),
            noise,
            mechanism: Arc::new(mechanism),
            role: None,
        }
    }

    pub fn with_env_params(mut self, params: &[&str]) -> Self {
        self.env_params = params.iter().map(|p| p.to_string()).collect();
        self
    }

    pub fn with_role(mut self, role: Role) -> Self {
        self.role = Some(role);
        self
    }
}

/// A structural causal model: nodes in topological order plus declared
/// environment parameters (with optional defaults).
#[derive(Debug, Clone)]
pub struct ScmSpec {
    nodes: Vec<NodeDef>,
    environment_params: BTreeMap<String, Option<f64>>,
    parent_index: Vec<Vec<usize>>,
}

impl ScmSpec {
    /// Validates topological order, noise parameters and environment
    /// references. `environment_params` maps each parameter to an optional
    /// default; parameters without a default must be supplied at sampling time.
    pub fn new(
        nodes: Vec<NodeDef>,
        environment_params: BTreeMap<String, Option<f64>>,
    ) -> Result<Self> {
        let mut position: HashMap<&str, usize> = HashMap::new();
        let mut parent_index = Vec::with_capacity(nodes.len());
        for (i, node) in nodes.iter().enumerate() {
            node.noise.validate(&node.name)?;
            let parents = node
                .parents
                .iter()
                .map(|p| {
                    position.get(p.as_str()).copied().ok_or_else(|| {
                        Error::config(format!(
                            "node `{}` references `{p}`, which is not defined before it",
                            node.name
                        ))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            for param in &node.env_params {
                if !environment_params.contains_key(param) {
                    return Err(Error::config(format!(
                        "node `{}` reads undeclared environment parameter `{param}`",
                        node.name
                    )));
                }
            }
            if position.insert(node.name.as_str(), i).is_some() {
                return Err(Error::config(format!("duplicate node `{}`", node.name)));
            }
            parent_index.push(parents);
        }
        Ok(Self {
            nodes,
            environment_params,
            parent_index,
        })
    }

    pub fn nodes(&self) -> &[NodeDef] {
        &self.nodes
    }

    pub fn environment_params(&self) -> &BTreeMap<String, Option<f64>> {
        &self.environment_params
    }

    /// Merges defaults with `env`, rejecting unknown or missing parameters.
    pub fn resolve_env(&self, env: &Env) -> Result<Env> {
        if let Some(unknown) = env
            .keys()
            .find(|k| !self.environment_params.contains_key(*k))
        {
            return Err(Error::config(format!(
                "unknown environment parameter `{unknown}`"
            )));
        }
        let mut out = Env::new();
        for (name, default) in &self.environment_params {
            let value =
                env.get(name).copied().or(*default).ok_or_else(|| {
                    Error::config(format!("missing environment parameter `{name}`"))
                })?;
            if !value.is_finite() {
                return Err(Error::config(format!(
                    "environment parameter `{name}` is not finite"
                )));
            }
            out.insert(name.clone(), value);
        }
        Ok(out)
    }

    /// Draws `n` joint samples, one column per node.
    #[allow(clippy::needless_range_loop)]
    pub fn sample(&self, env: &Env, n: usize, rng: RngHandle) -> Result<Dataset> {
        if n == 0 {
            return Err(Error::config("sample size must be at least 1"));
        }
        let env = self.resolve_env(env)?;
        let mut columns: Vec<Vec<f64>> = Vec::with_capacity(self.nodes.len());
        let mut parent_values = Vec::new();
        for (node, parents) in self.nodes.iter().zip(&self.parent_index) {
            let mut node_rng = rng.node_rng(&node.name);
            let mut values = Vec::with_capacity(n);
            for i in 0..n {
                parent_values.clear();
                parent_values.extend(parents.iter().map(|&p| columns[p][i]));
                let u = node.noise.draw(&mut node_rng);
                let v = (node.mechanism)(&parent_values, u, &env);
                if !v.is_finite() {
                    return Err(Error::Numeric(format!(
                        "node `{}` produced a non-finite value at row {i}",
                        node.name
                    )));
                }
                values.push(v);
            }
            columns.push(values);
        }
        let mut data =
            Dataset::from_columns(self.nodes.iter().map(|nd| nd.name.clone()).zip(columns))?;
        for node in &self.nodes {
            if let Some(role) = node.role {
                data.set_role(&node.name, role)?;
            }
        }
        Ok(data)
    }
}

/// Free-function form of [`ScmSpec::sample`].
pub fn sample(spec: &ScmSpec, env: &Env, n: usize, rng: RngHandle) -> Result<Dataset> {
    spec.sample(env, n, rng)
}
