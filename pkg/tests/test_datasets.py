import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial.distance import pdist

from secant_sketch import datasets as DS
from secant_sketch import geometry as G
from secant_sketch.datasets import Geometry, SampleSpec
from secant_sketch.errors import DimensionError, ParameterError


def test_sphere_sample():
    pts = DS.sample(SampleSpec(Geometry.SPHERE, 3, 1000, 1, d=2))
    np.testing.assert_allclose(np.linalg.norm(pts, axis=1), 1.0, atol=1e-12)
    assert np.linalg.norm(pts.mean(axis=0)) <= 0.1


def test_interval_endpoints():
    pts = DS.sample(SampleSpec(Geometry.INTERVAL, 1, 2, 5, embed=False))
    assert sorted(pts.ravel().tolist()) == [0.0, 1.0]
    placed = DS.sample(SampleSpec(Geometry.INTERVAL, 4, 2, 5))
    assert np.linalg.norm(placed[0] - placed[1]) == pytest.approx(1.0)


def test_gaussian_cloud_shape_and_moments():
    pts = DS.sample(SampleSpec(Geometry.GAUSSIAN_CLOUD, 1024, 100, 0))
    assert pts.shape == (100, 1024)
    assert abs(pts.mean()) < 0.01 and abs(pts.var() - 1) < 0.02


def test_descriptor_for():
    assert DS.descriptor_for(Geometry.SPHERE, d=2) == G.sphere(2)
    disk = DS.descriptor_for(Geometry.DISK, d=2)
    assert disk.volume == pytest.approx(math.pi) and math.isinf(disk.reach)
    assert disk.boundary_volume == pytest.approx(2 * math.pi) and disk.boundary_reach == 1
    assert DS.descriptor_for(Geometry.SWISS_ROLL) is None
    assert DS.descriptor_for(Geometry.GAUSSIAN_CLOUD) is None


@pytest.mark.parametrize("geom,d", [(Geometry.SPHERE, 2), (Geometry.DISK, 3), (Geometry.CIRCLE, None),
                                    (Geometry.INTERVAL, None), (Geometry.SWISS_ROLL, None)])
def test_embedding_preserves_distances(geom, d):
    spec = SampleSpec(geom, 12, 80, 7, d=d)
    flat = DS.sample_intrinsic(spec)
    placed = DS.sample(spec)
    assert placed.shape == (80, 12)
    np.testing.assert_allclose(pdist(placed), pdist(flat), atol=1e-10)


def test_nominal_geometry():
    disk = DS.sample_intrinsic(SampleSpec(Geometry.DISK, 2, 500, 1, d=2))
    assert np.all(np.linalg.norm(disk, axis=1) <= 1 + 1e-12)
    circle = DS.sample_intrinsic(SampleSpec(Geometry.CIRCLE, 2, 50, 1))
    np.testing.assert_allclose(np.linalg.norm(circle, axis=1), 1.0, atol=1e-12)
    roll = DS.sample_intrinsic(SampleSpec(Geometry.SWISS_ROLL, 3, 400, 1))
    t = np.hypot(roll[:, 0], roll[:, 2])
    assert np.all((t >= 1.5 * math.pi - 1e-9) & (t <= 4.5 * math.pi + 1e-9))
    np.testing.assert_allclose(np.arctan2(roll[:, 2], roll[:, 0]) % (2 * math.pi), t % (2 * math.pi), atol=1e-9)


def test_disk_uniform_radius():
    pts = DS.sample_intrinsic(SampleSpec(Geometry.DISK, 2, 10**5, 11, d=2))
    assert abs(np.mean(np.sum(pts**2, axis=1)) - 0.5) <= 0.01


def test_dimension_errors():
    with pytest.raises(DimensionError):
        DS.sample(SampleSpec(Geometry.SPHERE, 2, 5, 0, d=2))
    with pytest.raises(ParameterError):
        SampleSpec(Geometry.SPHERE, 5, 5, 0)
    with pytest.raises(ParameterError):
        SampleSpec(Geometry.CIRCLE, 5, 0, 0)


def test_unembedded_padding():
    pts = DS.sample(SampleSpec(Geometry.CIRCLE, 4, 10, 2, embed=False))
    assert pts.shape == (10, 4) and np.all(pts[:, 2:] == 0)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(list(Geometry)), st.integers(0, 2**64 - 1))
def test_seed_determinism(geom, seed):
    d = 2 if geom in (Geometry.SPHERE, Geometry.DISK) else None
    spec = SampleSpec(geom, 6, 15, seed, d=d)
    assert np.array_equal(DS.sample(spec), DS.sample(spec))


def test_binary_roundtrip_and_header(tmp_path):
    pts = DS.sample(SampleSpec(Geometry.SPHERE, 5, 7, 3, d=2))
    path = tmp_path / "pts.bin"
    DS.save_points(path, pts)
    raw = path.read_bytes()
    assert raw[:8] == b"SECSKPT1"
    assert int.from_bytes(raw[8:16], "little") == 5 and int.from_bytes(raw[16:24], "little") == 7
    assert len(raw) == 24 + 8 * 35
    np.testing.assert_array_equal(DS.load_points(path), pts)


def test_csv_roundtrip(tmp_path):
    pts = DS.sample(SampleSpec(Geometry.GAUSSIAN_CLOUD, 4, 6, 1))
    path = tmp_path / "pts.csv"
    DS.save_points(path, pts)
    np.testing.assert_array_equal(DS.load_points(path), pts)


def test_bad_binary(tmp_path):
    path = tmp_path / "junk.bin"
    path.write_bytes(b"NOTMAGIC" + bytes(16))
    with pytest.raises(ParameterError):
        DS.read_points(path)
    path.write_bytes(b"SECSKPT1" + (2).to_bytes(8, "little") + (2).to_bytes(8, "little") + bytes(8))
    with pytest.raises(ParameterError):
        DS.read_points(path)


def test_spec_json_roundtrip():
    import json
    spec = SampleSpec(Geometry.DISK, 9, 10, 4, d=3)
    assert SampleSpec.from_dict(json.loads(DS.spec_to_json(spec))) == spec
    with pytest.raises(ParameterError):
        SampleSpec.from_dict({"geometry": "torus", "N": 3, "n": 2})
