// Stereographic projection and the OBJ, JSON and CSV formats.

use adscmc::export::{import_json, project_surface, to_json_string, write_csv, write_obj, SurfaceFile};
use adscmc::gallery::gallery;
use adscmc::geometry::Orientation;
use adscmc::surface::{Pole, Surface};
use adscmc::Tolerances;

fn main() -> adscmc::Result<()> {
    let tol = Tolerances::default();
    let entry = gallery("b-scroll")?;
    let domain = adscmc::surface::Domain::square(-1.0, 1.0, 61)?;
    let surface = entry.build(&domain, &tol)?;
    let Surface::H31(s) = &surface else { unreachable!() };

    let image = project_surface(s, Pole::Plus)?;
    let inside = s
        .points
        .iter()
        .zip(&image.points)
        .filter(|(p, _)| p.to_vec().x0 > 0.0)
        .all(|(_, y)| -y.x1 * y.x1 + y.x2 * y.x2 + y.x3 * y.x3 < 1.0);
    println!("upper half lands inside the unit de Sitter sphere: {inside}");

    let mut obj = Vec::new();
    write_obj(&mut obj, &image)?;
    let text = String::from_utf8(obj).expect("ascii");
    let count = |p: &str| text.lines().filter(|l| l.starts_with(p)).count();
    println!("OBJ: {} vertices, {} faces", count("v "), count("f "));

    let (rep, checks) = entry.verify(&surface, Orientation::Positive, &tol)?;
    let file = SurfaceFile::new(&surface, Some((&rep, &checks)));
    let json = to_json_string(&file)?;
    let back = import_json(&json)?;
    println!("JSON: {} bytes, lossless round trip: {}", json.len(), back.surface()? == surface);

    let mut csv = Vec::new();
    write_csv(&mut csv, &rep)?;
    let csv = String::from_utf8(csv).expect("ascii");
    println!("CSV: {}", csv.lines().next().unwrap_or_default());
    Ok(())
}
