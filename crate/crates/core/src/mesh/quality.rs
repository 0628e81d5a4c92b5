use super::Mesh;

/// Element-area statistics relative to the prescribed area.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshQuality {
    /// Mean of `S_elem / S`.
    pub s_n_mean: f64,
    /// Mean of `|S_elem - S| / S`.
    pub s_var: f64,
    pub n_points: usize,
    pub n_elements: usize,
}

pub fn quality(mesh: &Mesh) -> MeshQuality {
    let s = mesh.prescribed_area();
    let m = mesh.n_elements().max(1) as f64;
    let (mut sum_n, mut sum_var) = (0.0, 0.0);
    for t in 0..mesh.n_elements() {
        let area = mesh.element_area(t);
        sum_n += area / s;
        sum_var += (area - s).abs() / s;
    }
    MeshQuality {
        s_n_mean: sum_n / m,
        s_var: sum_var / m,
        n_points: mesh.n_points(),
        n_elements: mesh.n_elements(),
    }
}
