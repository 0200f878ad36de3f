//! Write the same data as binary, JSON and CSV and read it back.

use moyal::io::{read_file, write_file, Data, Format};
use moyal::{f_grid, CoefficientMatrix, GridSpec1, GridSpec2};

fn main() -> moyal::Result<()> {
    let dir = std::env::temp_dir().join("moyal-formats");
    std::fs::create_dir_all(&dir)?;
    let spec = GridSpec2::square(GridSpec1::new(64, 0.25)?);
    let items =
        [("f21", Data::Grid2(f_grid(2, 1, spec))), ("e03", Data::Coeff(CoefficientMatrix::unit(4, 0, 3)))];
    for (name, data) in &items {
        for (ext, format) in [("bin", Format::Bin), ("json", Format::Json), ("csv", Format::Csv)] {
            let path = dir.join(format!("{name}.{ext}"));
            write_file(&path, data, format)?;
            let size = std::fs::metadata(&path)?.len();
            let same = read_file(&path)? == *data;
            println!("{:<40} {size:>8} bytes, identical after read: {same}", path.display());
        }
    }
    Ok(())
}
