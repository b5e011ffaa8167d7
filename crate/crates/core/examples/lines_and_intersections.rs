//! Lines of the affine plane over a finite field and how they meet.
//!
//! ```bash
//! cargo run --example lines_and_intersections -- 5
//! ```

use kakeya::geom::{intersect, line_points, Intersection};
use kakeya::{FieldTable, Line, Slope};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let q: u32 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(5);
    let field = FieldTable::with_order(q)?;
    let el = |i| field.elem(i).unwrap();

    let a = Line::finite(el(1), el(0));
    let b = Line::finite(el(2), el(1));
    let c = Line::finite(el(1), el(3));
    let v = Line::vertical(el(2));

    for line in [a, v] {
        let pts: Vec<_> = line_points(&field, &line).iter().map(|p| (p.x.idx(), p.y.idx())).collect();
        println!("slope {} intercept {}: {pts:?}", line.slope, line.intercept);
    }

    for (name, l1, l2) in [("a, b", a, b), ("a, c", a, c), ("a, a", a, a), ("b, v", b, v)] {
        match intersect(&field, &l1, &l2) {
            Intersection::Point(p) => println!("{name} meet at ({}, {})", p.x, p.y),
            Intersection::Parallel => println!("{name} are parallel"),
            Intersection::Coincident => println!("{name} coincide"),
        }
    }

    let slopes: Vec<String> = Slope::all(&field).map(|s| s.to_string()).collect();
    println!("{} directions: {}", slopes.len(), slopes.join(" "));
    Ok(())
}
