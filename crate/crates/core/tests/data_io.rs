use lcirt::{read_dataset, read_partition, DimensionPartition, Error, ErrorKind, ResponseMatrix, Schema};

fn read(text: &str) -> lcirt::Result<ResponseMatrix> {
    read_dataset(text.as_bytes(), &Schema::default())
}

#[test]
fn csv_round_trip() {
    let data = read("A1,A2,B1\n1,0,1\n0,0,1\n1,1,0\n").unwrap();
    assert_eq!(data.n_subjects(), 3);
    assert_eq!(data.codes(), ["A1", "A2", "B1"]);
    assert_eq!(data.row(2), [1, 1, 0]);
    let mut buf = Vec::new();
    data.write_csv(&mut buf).unwrap();
    assert_eq!(String::from_utf8(buf.clone()).unwrap(), "A1,A2,B1\n1,0,1\n0,0,1\n1,1,0\n");
    assert_eq!(read_dataset(&buf[..], &Schema::default()).unwrap(), data);
}

#[test]
fn id_column_is_skipped() {
    let schema = Schema {
        id_column: Some("id".into()),
    };
    let data = read_dataset("id,x,y\n17,1,0\n18,0,1\n".as_bytes(), &schema).unwrap();
    assert_eq!(data.codes(), ["x", "y"]);
    assert_eq!(data.values(), [1, 0, 0, 1]);
    let missing = read_dataset("a,b\n1,0\n".as_bytes(), &schema).unwrap_err();
    assert_eq!(missing.kind(), ErrorKind::Usage);
}

#[test]
fn malformed_data_is_rejected() {
    assert!(matches!(read("a,b\n1,2\n"), Err(Error::NonBinary { row: 1, column: 2, .. })));
    assert!(matches!(read("a,b\n1,NA\n"), Err(Error::NonBinary { .. })));
    assert!(matches!(read("a,b\n1,0\n1\n"), Err(Error::Ragged { row: 2, .. })));
    assert!(matches!(read("a,a\n1,0\n"), Err(Error::DuplicateItem(_))));
    assert!(matches!(read(""), Err(Error::Empty(_))));
    assert!(matches!(read("a,b\n"), Err(Error::Empty(_))));
    for bad in ["a,b\n1,2\n", "a,b\n1,0\n1\n", ""] {
        assert_eq!(read(bad).unwrap_err().kind(), ErrorKind::Validation);
    }
}

#[test]
fn partition_file_parsing() {
    let data = read("x,y,z\n1,0,1\n").unwrap();
    let items = data.items();
    let p = read_partition("item_code,group_index\nz,2\nx,1\ny,1\n".as_bytes(), items).unwrap();
    assert_eq!(p.assignment(), [0, 0, 1]);
    // header optional
    assert_eq!(read_partition("x,1\ny,1\nz,2\n".as_bytes(), items).unwrap(), p);

    let err = |t: &str| read_partition(t.as_bytes(), items).unwrap_err();
    assert!(matches!(err("x,1\ny,1\nw,2\nz,2\n"), Error::UnknownItem(_)));
    assert!(matches!(err("x,1\ny,1\nx,2\nz,2\n"), Error::DuplicateAssignment(_)));
    assert!(matches!(err("x,1\ny,1\n"), Error::MissingAssignment(_)));
    assert!(matches!(err("x,1\ny,0\nz,2\n"), Error::BadGroup { .. }));
    assert!(matches!(err("x,1\ny,1\nz,3\n"), Error::EmptyGroup(2)));
}

#[test]
fn partition_csv_round_trip() {
    let data = read("x,y,z,w\n1,0,1,0\n").unwrap();
    let p = DimensionPartition::new(vec![1, 0, 1, 2]).unwrap();
    let mut buf = Vec::new();
    p.write_csv(data.items(), &mut buf).unwrap();
    assert_eq!(
        String::from_utf8(buf.clone()).unwrap(),
        "item_code,group_index\nx,2\ny,1\nz,2\nw,3\n"
    );
    assert_eq!(read_partition(&buf[..], data.items()).unwrap(), p);
}

#[test]
fn restriction_keeps_codes_and_groups() {
    let data = read("x,y,z,w\n1,0,1,0\n0,1,1,1\n").unwrap();
    let p = DimensionPartition::new(vec![0, 0, 1, 1]).unwrap();
    let sub = data.restrict(&[4, 1]).unwrap();
    assert_eq!(sub.codes(), ["x", "w"]);
    assert_eq!(sub.values(), [1, 0, 0, 1]);
    assert_eq!(sub.items()[1].index, 2);
    assert_eq!(p.restrict(&[1, 4]).unwrap().assignment(), [0, 1]);
    assert!(matches!(p.restrict(&[1, 2]), Err(Error::EmptyGroup(2))));
    assert!(data.restrict(&[]).is_err());
    assert!(data.restrict(&[5]).is_err());
}

#[test]
fn fingerprint_tracks_values() {
    let a = read("x,y\n1,0\n0,1\n").unwrap();
    let b = read("x,y\n1,0\n1,1\n").unwrap();
    assert_eq!(a.fingerprint(), read("x,y\n1,0\n0,1\n").unwrap().fingerprint());
    assert_ne!(a.fingerprint(), b.fingerprint());
}
