import numpy as np
import pytest

from hgpqec.gf2 import BitVector, DimensionMismatchError
from hgpqec.graphs import BudgetExceededError, generate_configuration_model
from hgpqec.product import hypergraph_product
from hgpqec.ssf import build_catalog, decode_css, small_set_flip
from oracles import SmallSetFlipReference


@pytest.fixture(scope="module")
def desk_code():
    g = generate_configuration_model(12, 10, 5, 6, seed=3)
    code = hypergraph_product(g, g)
    return code, build_catalog(code, "z"), build_catalog(code, "x")


def random_error(rng, n, weight):
    err = np.zeros(n, dtype=np.uint8)
    err[rng.choice(n, size=weight, replace=False)] = 1
    return err


def test_catalog_subset_counts(desk_code):
    code, cat_z, cat_x = desk_code
    assert cat_z.generator_weight == 11
    assert cat_z.subsets_per_generator == 2047
    assert cat_x.subsets_per_generator == 2047
    g510 = generate_configuration_model(12, 6, 5, 10, seed=1)
    code510 = hypergraph_product(g510, g510)
    assert build_catalog(code510, "z").subsets_per_generator == 32767


def test_catalog_weight_cap():
    g510 = generate_configuration_model(12, 6, 5, 10, seed=1)
    code510 = hypergraph_product(g510, g510)
    with pytest.raises(BudgetExceededError):
        build_catalog(code510, "z", weight_cap=14)


def test_catalog_supports_match_generator_rows(desk_code):
    code, cat_z, cat_x = desk_code
    for g in range(0, cat_z.n_generators, 17):
        assert np.array_equal(cat_z.generator_support(g), code.h_z.rows[g].support)
    for g in range(0, cat_x.n_generators, 17):
        assert np.array_equal(cat_x.generator_support(g), code.h_x.rows[g].support)


def test_catalog_cached_images_match_mat_vec(desk_code):
    code, cat_z, cat_x = desk_code
    rng = np.random.default_rng(0)
    for cat, h_syn in ((cat_z, code.h_x), (cat_x, code.h_z)):
        for _ in range(10):
            g = int(rng.integers(cat.n_generators))
            mask = int(rng.integers(1, 1 << cat.generator_weight))
            err = BitVector(code.n_qubits, cat.subset_qubits(g, mask))
            assert cat.syndrome_image(g, mask) == h_syn.mat_vec_mul(err)


def test_zero_syndrome(desk_code):
    _, cat_z, _ = desk_code
    out = small_set_flip(cat_z, BitVector(cat_z.n_checks, []))
    assert out.converged and out.iterations == 0
    assert out.deduced_error.weight == 0
    assert out.status == "converged"


def test_syndrome_length_mismatch(desk_code):
    _, cat_z, _ = desk_code
    with pytest.raises(DimensionMismatchError):
        small_set_flip(cat_z, BitVector(cat_z.n_checks + 1, []))


def test_single_qubit_errors_corrected(desk_code):
    code, cat_z, _ = desk_code
    for q in range(code.n_qubits):
        err = np.zeros(code.n_qubits, dtype=np.uint8)
        err[q] = 1
        sigma = code.h_x.mat_vec_mul(BitVector.from_dense(err))
        out = small_set_flip(cat_z, sigma)
        assert out.converged
        residual = err ^ out.deduced_error.to_dense()
        assert not residual.any() or code.h_z.in_row_space_dense(residual)


def test_soundness_and_monotonicity(desk_code):
    code, cat_z, _ = desk_code
    rng = np.random.default_rng(1)
    for _ in range(300):
        err = random_error(rng, code.n_qubits, int(rng.integers(1, 12)))
        sigma = code.h_x.mat_vec_mul(BitVector.from_dense(err))
        out = small_set_flip(cat_z, sigma)
        assert out.iterations <= sigma.weight
        assert out.converged == (out.final_syndrome_weight == 0)
        if out.converged:
            assert code.h_x.mat_vec_mul(out.deduced_error) == sigma


@pytest.mark.parametrize("sector", ["z", "x"])
def test_engine_matches_full_scan_reference(desk_code, sector):
    # The production decoder prunes its generator scans; outcomes must be
    # bit-identical to the full scan, including the applied flip sequence.
    code, cat_z, cat_x = desk_code
    cat = cat_z if sector == "z" else cat_x
    h_gen = code.h_z if sector == "z" else code.h_x
    h_syn = code.h_x if sector == "z" else code.h_z
    ref = SmallSetFlipReference(h_gen.to_dense(), h_syn.to_dense())
    rng = np.random.default_rng(42 if sector == "z" else 43)
    for _ in range(40):
        err = random_error(rng, code.n_qubits, int(rng.integers(1, 9)))
        sigma = h_syn.mat_vec_mul(BitVector.from_dense(err))
        out = small_set_flip(cat, sigma)
        conv_ref, ehat_ref, trace_ref = ref.decode(sigma.to_dense())
        assert out.converged == conv_ref
        assert np.array_equal(out.deduced_error.to_dense(), ehat_ref)
        assert out.flip_trace == tuple(trace_ref)


@pytest.mark.slow
def test_weight3_errors_match_reference_1000(desk_code):
    code, cat_z, _ = desk_code
    ref = SmallSetFlipReference(code.h_z.to_dense(), code.h_x.to_dense())
    rng = np.random.default_rng(7)
    for _ in range(1000):
        err = random_error(rng, code.n_qubits, 3)
        sigma = code.h_x.mat_vec_mul(BitVector.from_dense(err))
        out = small_set_flip(cat_z, sigma)
        conv_ref, ehat_ref, trace_ref = ref.decode(sigma.to_dense())
        assert out.converged == conv_ref
        assert np.array_equal(out.deduced_error.to_dense(), ehat_ref)
        assert out.flip_trace == tuple(trace_ref)


@pytest.mark.parametrize("sector", ["z", "x"])
def test_engine_matches_reference_on_asymmetric_product(sector):
    # Product of two different graphs: the two sectors have different
    # window shapes, exercising the generic catalog geometry.
    g1 = generate_configuration_model(12, 10, 5, 6, seed=5)
    g2 = generate_configuration_model(12, 6, 3, 6, seed=6)
    code = hypergraph_product(g1, g2)
    cat = build_catalog(code, sector)
    h_gen = code.h_z if sector == "z" else code.h_x
    h_syn = code.h_x if sector == "z" else code.h_z
    ref = SmallSetFlipReference(h_gen.to_dense(), h_syn.to_dense())
    rng = np.random.default_rng(8)
    for _ in range(20):
        err = random_error(rng, code.n_qubits, int(rng.integers(1, 7)))
        sigma = h_syn.mat_vec_mul(BitVector.from_dense(err))
        out = small_set_flip(cat, sigma)
        conv_ref, ehat_ref, trace_ref = ref.decode(sigma.to_dense())
        assert out.converged == conv_ref
        assert np.array_equal(out.deduced_error.to_dense(), ehat_ref)
        assert out.flip_trace == tuple(trace_ref)


def test_weight_two_failures_are_flagged_not_silent(desk_code):
    # Desk-scale graphs are too small for the expansion that would make
    # every weight-2 error correctable; what must hold is that weight-1
    # errors never fail (tested above) and that weight-2 outcomes are
    # either corrected up to stabilizer or reported as non-converged --
    # checked here on a sample, with silent miscorrections counted.
    code, cat_z, _ = desk_code
    rng = np.random.default_rng(12)
    n = code.n_qubits
    silent = 0
    total = 0
    for _ in range(2000):
        err = random_error(rng, n, 2)
        sigma = code.h_x.mat_vec_mul(BitVector.from_dense(err))
        out = small_set_flip(cat_z, sigma)
        total += 1
        if out.converged:
            residual = err ^ out.deduced_error.to_dense()
            if residual.any() and not code.h_z.in_row_space_dense(residual):
                silent += 1
    # Converged-but-wrong outcomes exist only if the graph has effective
    # distance 2 defects; the pinned instance has none.
    assert silent == 0


def test_decode_css_zero_and_pure_z(desk_code):
    code, cat_z, cat_x = desk_code
    zero_x = BitVector(cat_z.n_checks, [])
    zero_z = BitVector(cat_x.n_checks, [])
    res = decode_css(code, (cat_z, cat_x), zero_x, zero_z)
    assert res.z_outcome.converged and res.x_outcome.converged
    assert res.z_outcome.deduced_error.weight == 0

    err = np.zeros(code.n_qubits, dtype=np.uint8)
    err[5] = 1
    sigma_x = code.h_x.mat_vec_mul(BitVector.from_dense(err))
    res = decode_css(code, (cat_z, cat_x), sigma_x, zero_z)
    assert res.z_outcome.converged
    assert res.x_outcome.converged and res.x_outcome.deduced_error.weight == 0


def test_decode_css_matches_isolated_calls(desk_code):
    code, cat_z, cat_x = desk_code
    rng = np.random.default_rng(3)
    for _ in range(25):
        z_err = random_error(rng, code.n_qubits, 4)
        x_err = random_error(rng, code.n_qubits, 4)
        sigma_x = code.h_x.mat_vec_mul(BitVector.from_dense(z_err))
        sigma_z = code.h_z.mat_vec_mul(BitVector.from_dense(x_err))
        res = decode_css(code, (cat_z, cat_x), sigma_x, sigma_z)
        alone_z = small_set_flip(cat_z, sigma_x)
        alone_x = small_set_flip(cat_x, sigma_z)
        assert res.z_outcome == alone_z
        assert res.x_outcome == alone_x


def test_decode_css_catalog_order_enforced(desk_code):
    code, cat_z, cat_x = desk_code
    with pytest.raises(ValueError):
        decode_css(code, (cat_x, cat_z), BitVector(cat_z.n_checks, []),
                   BitVector(cat_x.n_checks, []))
