use nhep_core::crossing::{classify, toy_scan, AlphaScan};
use nhep_core::io::{ingest_csv, write_sheet_grid, write_sphere_curve, write_trajectory};
use nhep_core::sphere::{to_sphere, PlanePoint};
use nhep_core::surface::{build_surface, DeltaMode};
use nhep_core::toy::preset;
use nhep_core::{Error, Window};

#[test]
fn exported_scan_classifies_identically() {
    for name in ["class1", "class2", "fig2-wb"] {
        let p = preset(name).unwrap();
        let scan = toy_scan(&p, &AlphaScan::default()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scan.csv");
        write_trajectory(&scan.trajectory, std::fs::File::create(&path).unwrap()).unwrap();
        let ds = ingest_csv(&path).unwrap();
        let back = ds.trajectory(0, 1).unwrap();
        assert_eq!(back, scan.trajectory);
        assert_eq!(classify(&back).unwrap(), classify(&scan.trajectory).unwrap());
    }
}

#[test]
fn missing_file_is_io_error() {
    assert!(matches!(ingest_csv("/nonexistent/scan.csv"), Err(Error::Io(_))));
}

#[test]
fn grid_and_sphere_csv_layout() {
    let m = preset("double-ep").unwrap().model();
    let w = Window::new((0.3, 0.8), (0.9, 1.0)).unwrap();
    let g = build_surface(&m, &w, 16, 16, DeltaMode::Delta).unwrap();
    let mut buf = Vec::new();
    write_sheet_grid(&g, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("p1,p2,re1,im1,re2,im2,is_cut_edge"));
    assert_eq!(lines.count(), 256);
    assert!(!text.contains('\r'));

    let mut buf = Vec::new();
    write_sphere_curve(&[to_sphere(PlanePoint::finite(1.0, 0.0))], &mut buf).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap(), "tn,tchi,txi\n1,0,0\n");
}
