use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{element_matrices, BeamModel, SupportCondition};
use crate::{OmaError, Result};

/// Global equation numbers of one node; `None` marks a constrained DOF.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeDofs {
    pub translation: Option<usize>,
    pub rotation: Option<usize>,
}

/// A measurement channel: the free vertical translation of a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Channel {
    /// 1-based node number.
    pub node: usize,
    /// Index into the reduced (free) DOF vector.
    pub dof: usize,
}

impl Channel {
    pub fn label(&self) -> String {
        format!("n{}", self.node)
    }
}

/// Reduced stiffness and mass matrices with constrained DOFs eliminated.
#[derive(Debug, Clone)]
pub struct GlobalSystem {
    pub stiffness: DMatrix<f64>,
    pub mass: DMatrix<f64>,
    pub dof_map: Vec<NodeDofs>,
    pub channels: Vec<Channel>,
}

impl GlobalSystem {
    pub fn n_dofs(&self) -> usize {
        self.stiffness.nrows()
    }

    pub fn n_channels(&self) -> usize {
        self.channels.len()
    }

    pub fn channel_labels(&self) -> Vec<String> {
        self.channels.iter().map(Channel::label).collect()
    }
}

fn constraints(support: SupportCondition, n_nodes: usize) -> Vec<(bool, bool)> {
    // (translation fixed, rotation fixed) per node
    let mut fixed = vec![(false, false); n_nodes];
    let last = n_nodes - 1;
    match support {
        SupportCondition::CF => fixed[0] = (true, true),
        SupportCondition::SS => {
            fixed[0] = (true, false);
            fixed[last] = (true, false);
        }
        SupportCondition::CS => {
            fixed[0] = (true, true);
            fixed[last] = (true, false);
        }
        SupportCondition::CC => {
            fixed[0] = (true, true);
            fixed[last] = (true, true);
        }
    }
    fixed
}

/// Assemble the constrained global matrices of `model`.
///
/// Pins restrain the vertical translation only. Fails with
/// [`OmaError::NoChannels`] when no vertical translation is left free.
pub fn assemble_model(model: &BeamModel) -> Result<GlobalSystem> {
    model.validate()?;
    let n_nodes = model.n_elements + 1;
    let fixed = constraints(model.support, n_nodes);

    let mut dof_map = Vec::with_capacity(n_nodes);
    let mut channels = Vec::new();
    let mut next = 0usize;
    for (i, &(fix_v, fix_r)) in fixed.iter().enumerate() {
        let translation = if fix_v {
            None
        } else {
            next += 1;
            Some(next - 1)
        };
        let rotation = if fix_r {
            None
        } else {
            next += 1;
            Some(next - 1)
        };
        if let Some(dof) = translation {
            channels.push(Channel { node: i + 1, dof });
        }
        dof_map.push(NodeDofs { translation, rotation });
    }
    if channels.is_empty() {
        return Err(OmaError::NoChannels);
    }

    let n = next;
    let (ke, me) = element_matrices(
        model.material.elastic_modulus,
        model.section.second_moment(),
        model.material.mass_density,
        model.section.area(),
        model.element_length(),
    )?;
    let mut stiffness = DMatrix::zeros(n, n);
    let mut mass = DMatrix::zeros(n, n);
    for e in 0..model.n_elements {
        let (a, b) = (dof_map[e], dof_map[e + 1]);
        let map = [a.translation, a.rotation, b.translation, b.rotation];
        for (r, gr) in map.iter().enumerate() {
            let Some(gr) = gr else { continue };
            for (c, gc) in map.iter().enumerate() {
                let Some(gc) = gc else { continue };
                stiffness[(*gr, *gc)] += ke[(r, c)];
                mass[(*gr, *gc)] += me[(r, c)];
            }
        }
    }

    Ok(GlobalSystem {
        stiffness,
        mass,
        dof_map,
        channels,
    })
}
