"""Host construction, equalizers, line embeddings, extraction.

Builders re-verify their own algebra internally, so these tests focus on
extensional facts a caller can observe: point sets of equalizers and
tuple spaces against brute-force filters, projection behavior on every
block, frozen sizes for the smallest host, and the success/diagnostic
split of the extraction walk.
"""

import itertools
import json

import pytest

from qramsey import (AFFINE, VECTOR, Budget, ConfigFamily, ExtractionFailure,
                     HostSpec, Line, LinearMap, MonochromaticCopy, apply,
                     auto_n1, auto_word_length, build_base_host,
                     build_product_host, color_pattern, compose,
                     enumerate_subspaces, equalizer_subspace,
                     extract_monochromatic_copy, family_isomorphic,
                     full_space, host_from_json, host_to_json, identity_map,
                     image_space, induced_host_verify, line_embedding,
                     make_field, span, tuple_space, zero_space)


def vector_spec(nf, word_len=1, num_colors=1, base_rank=2):
    """q=2 vector spec: n=2, k=1, first nf of the three rank-1 members."""
    f = make_field(2)
    amb = full_space(f, VECTOR, 2)
    members = enumerate_subspaces(amb, 1)[:nf]
    fam = ConfigFamily(amb, tuple(members))
    return HostSpec(2, VECTOR, 1, 2, num_colors, fam, base_rank, word_len)


def affine_spec(nf, word_len=1):
    f = make_field(2)
    amb = full_space(f, AFFINE, 2)
    members = enumerate_subspaces(amb, 1)[:nf]
    fam = ConfigFamily(amb, tuple(members))
    return HostSpec(2, AFFINE, 1, 2, 1, fam, 2, word_len)


@pytest.fixture(scope="module")
def tiny_host():
    return build_product_host(build_base_host(vector_spec(1)), 1)


@pytest.fixture(scope="module")
def two_cover_base():
    return build_base_host(vector_spec(2))


# -- spec validation --------------------------------------------------------


def test_spec_validation():
    f = make_field(2)
    amb = full_space(f, VECTOR, 2)
    fam = ConfigFamily(amb, tuple(enumerate_subspaces(amb, 1)[:1]))
    with pytest.raises(ValueError):
        HostSpec(2, VECTOR, 1, 3, 1, fam, 3, 1)  # ambient rank != n
    with pytest.raises(ValueError):
        HostSpec(2, VECTOR, 2, 2, 1, fam, 2, 1)  # member rank != k
    with pytest.raises(ValueError):
        HostSpec(2, VECTOR, 1, 2, 1, fam, 1, 1)  # N0 < n
    with pytest.raises(ValueError):
        HostSpec(2, VECTOR, 1, 2, 1, fam, 2, 0)  # N1 < 1
    with pytest.raises(ValueError):
        HostSpec(2, AFFINE, 1, 2, 1, fam, 2, 1)  # mode mismatch with family
    with pytest.raises(ValueError):
        HostSpec(2, VECTOR, 1, 2, 0, fam, 2, 1)  # no colors


def test_spec_json_roundtrip():
    spec = vector_spec(2, word_len=3, num_colors=2)
    rt = HostSpec.from_json(spec.to_json())
    assert rt == spec
    auto = vector_spec(1)
    data = auto.to_json()
    data["N1"] = "auto"
    assert HostSpec.from_json(data).word_len is None


# -- base host ---------------------------------------------------------------


def test_base_host_frozen_sizes(two_cover_base):
    base = two_cover_base
    # one target (E itself), two covers, rank 2 + 2*(2-1) slots
    assert base.space.rank == 4
    assert len(base.blocks) == 1 and len(base.covers) == 2
    assert len(base.base_k_spaces) == 3
    assert len(base.cover_k_spaces) == 6
    assert base.projection.domain_len == 4 and base.projection.codomain_len == 2


def test_base_host_projection_behavior(two_cover_base):
    base = two_cover_base
    E = base.base_space
    pi = base.projection
    assert image_space(pi) == E
    for block in base.blocks:
        assert apply(pi, block.span) == block.target
        # lift is a section of the projection over the target
        for p in block.target.points():
            assert apply(pi, apply(block.lift, p)) == p
        for cb in block.covers:
            assert cb.cover.rank == base.spec.base_rank
            assert apply(pi, cb.cover) == E
            assert apply(pi, cb.lifted) == apply(block.embed, cb.member)


def test_base_host_embed_is_configuration_iso(two_cover_base):
    base = two_cover_base
    fam = base.spec.family
    for block in base.blocks:
        assert apply(block.embed, fam.ambient) == block.target
        image_fam = ConfigFamily(
            block.target,
            tuple(apply(block.embed, m) for m in fam.members))
        assert family_isomorphic(fam, image_fam) is not None


def test_base_host_cover_k_spaces(two_cover_base):
    base = two_cover_base
    keys = [s.key() for s in base.cover_k_spaces]
    assert keys == sorted(keys) and len(set(keys)) == len(keys)
    for s in base.cover_k_spaces:
        assert any(c.contains_subspace(s) for c in base.covers)
        assert apply(base.projection, s).rank == s.rank


def test_base_host_affine():
    base = build_base_host(affine_spec(2))
    # affine rank bookkeeping: 2 + 2*(2-1) slots like the vector case
    assert base.space.rank == 4
    assert image_space(base.projection) == base.base_space
    for block in base.blocks:
        assert apply(base.projection, block.span) == block.target


def test_base_host_multiple_targets():
    # N0 = 3 gives seven rank-2 targets inside E, one cover per (U, member)
    spec = vector_spec(1, base_rank=3)
    base = build_base_host(spec)
    assert len(base.blocks) == 7
    assert len(base.covers) == 7
    assert base.space.rank == 7 * (2 + (3 - 1) * 1)
    for block in base.blocks:
        assert apply(base.projection, block.span) == block.target


# -- equalizer ----------------------------------------------------------------


def equalizer_oracle(pi, w):
    """All concatenated w-tuples of domain points with equal projection."""
    f = pi.field
    dom = list(itertools.product(range(f.order), repeat=pi.domain_len))
    groups = {}
    for p in dom:
        groups.setdefault(apply(pi, p), []).append(p)
    pts = set()
    for grp in groups.values():
        for tup in itertools.product(grp, repeat=w):
            pts.add(tuple(x for part in tup for x in part))
    return pts


def test_equalizer_word_one_is_identity(two_cover_base):
    X = equalizer_subspace(two_cover_base.projection, 1)
    assert X == two_cover_base.space


@pytest.mark.parametrize("w", [2, 3])
def test_equalizer_matches_oracle(w):
    base = build_base_host(vector_spec(1))  # rank-3 block space: 8 points
    X = equalizer_subspace(base.projection, w)
    assert set(X.points()) == equalizer_oracle(base.projection, w)


def test_equalizer_affine_matches_oracle():
    base = build_base_host(affine_spec(1))
    X = equalizer_subspace(base.projection, 2)
    assert set(X.points()) == equalizer_oracle(base.projection, 2)


def test_equalizer_rank_law_samples():
    import random
    rng = random.Random(606)
    f = make_field(2)
    for _ in range(10):
        dom = rng.randint(1, 3)
        cod = rng.randint(1, 2)
        rows = tuple(tuple(rng.randrange(2) for _ in range(dom))
                     for _ in range(cod))
        pi = LinearMap(VECTOR, f, dom, cod, rows)
        for w in (1, 2, 3):
            X = equalizer_subspace(pi, w)
            r_im = image_space(pi).rank
            assert X.rank == w * dom - (w - 1) * r_im


# -- tuple spaces --------------------------------------------------------------


def tuple_space_oracle(pi, parts):
    pts = set()
    plists = [list(p.points()) for p in parts]
    for tup in itertools.product(*plists):
        if len({apply(pi, x) for x in tup}) == 1:
            pts.add(tuple(c for x in tup for c in x))
    return pts


def test_tuple_space_matches_oracle(two_cover_base):
    base = two_cover_base
    pi = base.projection
    by_image = {}
    for g in base.cover_k_spaces:
        by_image.setdefault(apply(pi, g).key(), []).append(g)
    fiber = next(iter(by_image.values()))
    assert len(fiber) == 2
    for parts in itertools.product(fiber, repeat=2):
        ts = tuple_space(pi, parts)
        assert set(ts.points()) == tuple_space_oracle(pi, parts)
        assert ts.rank == parts[0].rank


def test_tuple_space_rejects_mismatched_images(two_cover_base):
    base = two_cover_base
    pi = base.projection
    gs = base.cover_k_spaces
    a = gs[0]
    b = next(g for g in gs
             if apply(pi, g).key() != apply(pi, a).key())
    with pytest.raises(ValueError):
        tuple_space(pi, (a, b))


def test_tuple_space_rejects_rank_collapse(two_cover_base):
    base = two_cover_base
    from qramsey import kernel_space
    ker = kernel_space(base.projection)
    assert ker.rank >= 1
    kline = span(base.field, VECTOR, [ker.basis_points()[0]], 4)
    with pytest.raises(ValueError):
        tuple_space(base.projection, (kline, kline))


# -- product host ---------------------------------------------------------------


def test_tiny_host_frozen_sizes(tiny_host):
    host = tiny_host
    assert host.space.rank == 3
    assert len(host.members) == 3
    assert len(host.base.covers) == 1
    assert host.space == host.base.space  # word length 1


def test_product_host_member_structure():
    base = build_base_host(vector_spec(2))
    host = build_product_host(base, 2)
    # |H| = sum over fibers of size^w, here 3 fibers of 2 -> 12
    assert len(host.members) == 12
    assert host.space.rank == 2 * 4 - 1 * 2
    seen = set()
    for member, parts in zip(host.members, host.member_parts):
        assert member.key() not in seen
        seen.add(member.key())
        rebuilt = tuple_space(base.projection,
                              [base.cover_k_spaces[j] for j in parts])
        assert member == rebuilt
        assert host.space.contains_subspace(member)
    # fibers partition the cover k-spaces
    flat = sorted(i for fib in host.fibers for i in fib)
    assert flat == list(range(len(base.cover_k_spaces)))


def test_product_host_projection(tiny_host):
    host = tiny_host
    pi_t = host.projection
    base_pi = host.base.projection
    assert pi_t.domain_len == host.word_len * host.base.space.ambient_len
    for m, parts in zip(host.members, host.member_parts):
        img = apply(base_pi, host.base.cover_k_spaces[parts[0]])
        assert apply(pi_t, m) == img


def test_cover_slot_table(tiny_host):
    host = tiny_host
    base = host.base
    for ci, row in enumerate(host.cover_slot):
        for j, gi in enumerate(row):
            g = base.cover_k_spaces[gi]
            assert base.covers[ci].contains_subspace(g)
            assert apply(base.projection, g) == base.base_k_spaces[j]


# -- color patterns ---------------------------------------------------------------


def test_color_pattern_constant(tiny_host):
    host = tiny_host
    coloring = {m.key(): 5 for m in host.members}
    assert color_pattern(host, (0,), coloring) == (5, 5, 5)


def test_color_pattern_word_validation(tiny_host):
    coloring = {m.key(): 0 for m in tiny_host.members}
    with pytest.raises(ValueError):
        color_pattern(tiny_host, (0, 0), coloring)
    with pytest.raises(ValueError):
        color_pattern(tiny_host, (9,), coloring)
    with pytest.raises(KeyError):
        color_pattern(tiny_host, (0,), {})


def test_color_pattern_tracks_members():
    base = build_base_host(vector_spec(2))
    host = build_product_host(base, 1)
    coloring = {m.key(): 0 for m in host.members}
    # flipping one member's color must flip exactly one slot of the
    # patterns of the words whose covers contain it
    victim = host.members[0]
    coloring[victim.key()] = 1
    flips = 0
    for word in itertools.product(range(len(base.covers)), repeat=1):
        pat = color_pattern(host, word, coloring)
        flips += sum(1 for c in pat if c == 1)
    assert flips == 1


# -- line embeddings -----------------------------------------------------------


def test_line_embedding_flatten_section_inverse():
    base = build_base_host(vector_spec(2))
    host = build_product_host(base, 2)
    line = next(iter_lines(host))
    emb = line_embedding(host, line)
    f = base.field
    ident = identity_map(f, VECTOR, base.space.ambient_len)
    assert compose(emb.flatten, emb.section) == ident
    copy_pts = {apply(emb.section, p) for p in base.space.points()}
    assert copy_pts == set(emb.space.points())
    for p in copy_pts:
        assert host.space.is_member(p)


def iter_lines(host):
    from qramsey import enumerate_lines
    return enumerate_lines(host.word_len, len(host.base.covers))


def test_line_embedding_word_spaces():
    base = build_base_host(vector_spec(2))
    host = build_product_host(base, 2)
    for line in iter_lines(host):
        emb = line_embedding(host, line)
        t = len(base.covers)
        assert len(emb.word_spaces) == t
        for s in range(t):
            ws = emb.word_spaces[s]
            assert emb.space.contains_subspace(ws)
            assert apply(emb.flatten, ws) == base.covers[s]
        host_keys = {m.key() for m in host.members}
        for hm in emb.host_members:
            assert hm.key() in host_keys
        # members through the copy flatten onto the cover k-spaces
        assert len(emb.host_members) == len(base.cover_k_spaces)
        flat = sorted(apply(emb.flatten, hm).key() for hm in emb.host_members)
        assert flat == [g.key() for g in base.cover_k_spaces]


def test_line_embedding_trivial_word():
    host = build_product_host(build_base_host(vector_spec(1)), 1)
    emb = line_embedding(host, Line(1, (0,), ()))
    assert emb.space == host.space


# -- extraction -----------------------------------------------------------------


def test_extract_tiny_success(tiny_host):
    host = tiny_host
    coloring = {m.key(): 0 for m in host.members}
    out = extract_monochromatic_copy(host, coloring)
    assert isinstance(out, MonochromaticCopy)
    assert out.color == 0 and len(out.members) == 1
    assert out.space.rank == 2
    data = out.to_json()
    assert data["status"] == "success"


def test_extract_respects_colors(tiny_host):
    host = tiny_host
    coloring = {m.key(): 3 for m in host.members}
    with pytest.raises(ValueError):
        extract_monochromatic_copy(host, coloring)  # r=1 allows color 0 only
    with pytest.raises(KeyError):
        extract_monochromatic_copy(host, {})


def test_extract_two_color_lucky_coloring():
    # no guarantee at this word length, but a cooperative coloring works
    spec = vector_spec(2, word_len=1, num_colors=2)
    host = build_product_host(build_base_host(spec), 1)
    coloring = {m.key(): 1 for m in host.members}
    out = extract_monochromatic_copy(host, coloring)
    assert isinstance(out, MonochromaticCopy)
    assert out.color == 1
    assert len(out.members) == 2


def test_extract_adversarial_line_diagnostic():
    # two covers, word length 1: color the covers apart and the single
    # moving line sees two different patterns
    spec = vector_spec(2, word_len=1, num_colors=2)
    base = build_base_host(spec)
    host = build_product_host(base, 1)
    coloring = {}
    for m, parts in zip(host.members, host.member_parts):
        cover_of = next(ci for ci, row in enumerate(host.cover_slot)
                        if parts[0] in row)
        coloring[m.key()] = 0 if cover_of == 0 else 1
    out = extract_monochromatic_copy(host, coloring)
    assert isinstance(out, ExtractionFailure)
    assert out.step == "line_search"
    assert out.to_json()["status"] == "diagnostic"


def test_extract_adversarial_subspace_diagnostic():
    # one cover keeps the line trivially monochromatic, but a rainbow
    # pattern leaves no monochromatic target inside the base space
    spec = vector_spec(1, word_len=1, num_colors=3)
    host = build_product_host(build_base_host(spec), 1)
    coloring = {m.key(): i for i, m in enumerate(host.members)}
    out = extract_monochromatic_copy(host, coloring)
    assert isinstance(out, ExtractionFailure)
    assert out.step == "subspace_search"
    assert out.pattern is not None and len(set(out.pattern)) == 3


def test_extract_empty_family():
    f = make_field(2)
    amb = full_space(f, VECTOR, 2)
    spec = HostSpec(2, VECTOR, 1, 2, 2, ConfigFamily(amb, ()), 2, 1)
    host = build_product_host(build_base_host(spec), 1)
    assert host.members == ()
    out = extract_monochromatic_copy(host, {})
    assert isinstance(out, MonochromaticCopy)
    assert out.members == () and out.space.rank == 2


def test_extract_matches_verify_on_grid():
    # every r=1 grid host: extraction succeeds and the copy re-verifies
    for nf in (1, 2, 3):
        for w in (1, 2):
            spec = vector_spec(nf)
            host = build_product_host(build_base_host(spec), w)
            coloring = {m.key(): 0 for m in host.members}
            out = extract_monochromatic_copy(host, coloring)
            assert isinstance(out, MonochromaticCopy)
            got = ConfigFamily(out.space, out.members)
            assert family_isomorphic(spec.family, got) is not None
            if len(host.members) <= 20:
                res = induced_host_verify(host.space, host.members,
                                          spec.family, 1)
                assert res.holds


# -- automatic word length --------------------------------------------------------


def test_auto_word_length_values():
    assert auto_word_length(1, 5, 10) == 1
    assert auto_word_length(7, 1, 10) == 1
    assert auto_word_length(2, 2, 1) == 2  # hj(2, 2) = 2
    assert auto_word_length(2, 2, 3, n_max=1) is None  # out of range
    assert auto_word_length(2, 2, 1, budget=Budget(max_nodes=1)) is None


def test_auto_n1_degenerate():
    spec = vector_spec(2)
    base = build_base_host(spec)
    assert auto_n1(spec, base) == 1  # single color


# -- bundle serialization -----------------------------------------------------------


def test_bundle_roundtrip(tiny_host):
    host = tiny_host
    data = host_to_json(host)
    rt = host_from_json(data)
    assert rt.space == host.space
    assert rt.word_len == host.word_len
    assert [m.key() for m in rt.members] == [m.key() for m in host.members]
    assert rt.projection == host.projection
    assert rt.member_parts == host.member_parts
    assert rt.cover_slot == host.cover_slot
    assert json.dumps(host_to_json(rt)) == json.dumps(data)


def test_bundle_keys(tiny_host):
    data = host_to_json(tiny_host)
    for key in ("spec", "E", "V", "blocks", "G", "pi", "Y", "X", "H",
                "pi_tilde"):
        assert key in data
    assert data["spec"]["N1"] == 1


def test_bundle_requires_resolved_word_len(tiny_host):
    data = host_to_json(tiny_host)
    data["spec"]["N1"] = "auto"
    with pytest.raises(ValueError):
        host_from_json(data)
