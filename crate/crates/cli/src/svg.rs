use std::fmt::Write as _;

use metromesh_core::Mesh;

const WIDTH: f64 = 800.0;
const MARGIN: f64 = 20.0;
const LEGEND_WIDTH: f64 = 120.0;

/// Blue-white-red ramp over `t ∈ [0, 1]`.
fn ramp(t: f64) -> (u8, u8, u8) {
    let t = t.clamp(0.0, 1.0);
    let lerp = |a: f64, b: f64, s: f64| (a + (b - a) * s).round() as u8;
    if t < 0.5 {
        let s = t / 0.5;
        (lerp(59.0, 247.0, s), lerp(76.0, 247.0, s), lerp(192.0, 247.0, s))
    } else {
        let s = (t - 0.5) / 0.5;
        (lerp(247.0, 180.0, s), lerp(247.0, 4.0, s), lerp(247.0, 38.0, s))
    }
}

fn hex((r, g, b): (u8, u8, u8)) -> String {
    format!("#{r:02x}{g:02x}{b:02x}")
}

/// Per-node scalar shown as a colour ramp.
pub struct Field<'a> {
    pub label: &'a str,
    pub values: &'a [f64],
}

/// Wireframe of `mesh` in a viewport fixed by its superdomain. With a field,
/// each triangle is filled by the mean of its three nodal values and a
/// legend group is appended.
pub fn render(mesh: &Mesh, field: Option<Field<'_>>) -> String {
    let (lo, hi) = mesh.superdomain();
    let span_x = (hi.x - lo.x).max(f64::MIN_POSITIVE);
    let span_y = (hi.y - lo.y).max(f64::MIN_POSITIVE);
    let scale = (WIDTH - 2.0 * MARGIN) / span_x;
    let height = span_y * scale + 2.0 * MARGIN;
    let total_width = WIDTH + if field.is_some() { LEGEND_WIDTH } else { 0.0 };
    let px = |x: f64| MARGIN + (x - lo.x) * scale;
    let py = |y: f64| MARGIN + (hi.y - y) * scale;
    let stroke = (0.002 * span_x.max(span_y) * scale).clamp(0.3, 1.5);

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total_width:.0}" height="{height:.0}" viewBox="0 0 {total_width:.3} {height:.3}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);

    let range = field.as_ref().map(|f| {
        let lo = f.values.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = f.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    });
    let _ = writeln!(
        s,
        r##"<g id="mesh" stroke="#333333" stroke-width="{stroke:.3}" stroke-linejoin="round">"##
    );
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let fill = match (&field, range) {
            (Some(f), Some((vmin, vmax))) => {
                let mean = tri.iter().map(|&i| f.values[i]).sum::<f64>() / 3.0;
                let u = if vmax > vmin {
                    (mean - vmin) / (vmax - vmin)
                } else {
                    0.5
                };
                hex(ramp(u))
            }
            _ => "none".to_string(),
        };
        let pts: Vec<String> = tri
            .iter()
            .map(|&i| format!("{:.3},{:.3}", px(mesh.points[i].x), py(mesh.points[i].y)))
            .collect();
        let _ = writeln!(s, r#"<polygon id="t{t}" points="{}" fill="{fill}"/>"#, pts.join(" "));
    }
    let _ = writeln!(s, "</g>");

    if let (Some(f), Some((vmin, vmax))) = (&field, range) {
        let x0 = WIDTH + 10.0;
        let bar_h = (height - 2.0 * MARGIN - 40.0).max(40.0);
        let steps = 32;
        let _ = writeln!(s, r#"<g id="legend" font-family="sans-serif" font-size="11">"#);
        let _ = writeln!(
            s,
            r#"<text x="{x0:.3}" y="{:.3}">{}</text>"#,
            MARGIN + 10.0,
            escape(f.label)
        );
        for k in 0..steps {
            let u = 1.0 - (k as f64 + 0.5) / steps as f64;
            let y = MARGIN + 20.0 + bar_h * k as f64 / steps as f64;
            let _ = writeln!(
                s,
                r#"<rect x="{x0:.3}" y="{y:.3}" width="20" height="{:.3}" fill="{}"/>"#,
                bar_h / steps as f64 + 0.5,
                hex(ramp(u))
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.3}" y="{:.3}">{vmax:.4e}</text>"#,
            x0 + 26.0,
            MARGIN + 30.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.3}" y="{:.3}">{vmin:.4e}</text>"#,
            x0 + 26.0,
            MARGIN + 20.0 + bar_h
        );
        let _ = writeln!(s, "</g>");
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ramp_end_points() {
        assert_eq!(hex(ramp(0.0)), "#3b4cc0");
        assert_eq!(hex(ramp(0.5)), "#f7f7f7");
        assert_eq!(hex(ramp(1.0)), "#b40426");
        assert_eq!(ramp(-3.0), ramp(0.0));
    }

    #[test]
    fn escapes_labels() {
        assert_eq!(escape("a<b & c>"), "a&lt;b &amp; c&gt;");
    }
}
