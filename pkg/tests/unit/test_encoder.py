"""
Testes unitários do encoder: adjacência, ST-GCN, cabeça gaussiana e
reparametrização.
"""

import numpy as np
import pytest

from src.contrastive import vcl_objective
from src.core.exceptions import ContractError, DimensionError
from src.core.models import STGCNConfig
from src.data.skeleton import SkeletonTopology
from src.encoder import (
    GaussianHead,
    ParamSet,
    SkeletonEncoder,
    build_adjacency,
    gaussian_head_forward,
    init_stgcn_params,
    last_spatial_key,
    reparameterize,
    stgcn_forward,
)
from src.numerics import Tensor, finite_diff_check, l2_normalize, mean, reduce_sum


class TestBuildAdjacency:
    """Testes para build_adjacency."""

    def test_junta_unica(self):
        """Uma junta sem arestas → [[1.0]]."""
        adjacency = build_adjacency(SkeletonTopology(n_joints=1, edges=()))
        assert adjacency.matrix.tolist() == [[1.0]]

    def test_duas_juntas(self):
        """Uma aresta → todas as entradas 0.5."""
        adjacency = build_adjacency(SkeletonTopology(n_joints=2, edges=((0, 1),)))
        np.testing.assert_allclose(adjacency.matrix, [[0.5, 0.5], [0.5, 0.5]])

    def test_oraculo_denso(self, default_topology):
        """D^{−1/2}(A + I)D^{−1/2} calculado com álgebra densa."""
        a_hat = default_topology.binary_adjacency() + np.eye(17)
        d_inv_sqrt = np.diag(1.0 / np.sqrt(a_hat.sum(axis=1)))
        expected = d_inv_sqrt @ a_hat @ d_inv_sqrt
        matrix = build_adjacency(default_topology).matrix
        assert np.max(np.abs(matrix - expected)) < 1e-12

    def test_simetrica_e_limitada(self, default_topology):
        """Simétrica com entradas em [0, 1]."""
        matrix = build_adjacency(default_topology).matrix
        np.testing.assert_array_equal(matrix, matrix.T)
        assert matrix.min() >= 0.0
        assert matrix.max() <= 1.0


class TestSTGCNForward:
    """Testes para stgcn_forward."""

    def test_entrada_nula(self, toy_config, chain_topology):
        """Entrada nula com vieses nulos → features nulas."""
        params = init_stgcn_params(toy_config, np.random.default_rng(0))
        out = stgcn_forward(
            Tensor(np.zeros((3, 8, 4))), params, build_adjacency(chain_topology), toy_config
        )
        np.testing.assert_array_equal(out.data, np.zeros(toy_config.feature_dim))

    def test_formas(self, toy_encoder, rng):
        """[C, T, N] → [F]; [B, C, T, N] → [B, F]."""
        single = toy_encoder.features(rng.normal(size=(3, 8, 4)))
        batch = toy_encoder.features(rng.normal(size=(5, 3, 8, 4)))
        assert single.shape == (4,)
        assert batch.shape == (5, 4)

    def test_juntas_incompativeis(self, toy_encoder, rng):
        """N diferente da adjacência."""
        with pytest.raises(DimensionError):
            toy_encoder.features(rng.normal(size=(3, 8, 5)))

    def test_captura_da_camada_espacial(self, toy_encoder, toy_config, rng):
        """A ativação espacial do último bloco é capturada com T do bloco."""
        capture: dict = {}
        toy_encoder.features(rng.normal(size=(2, 3, 8, 4)), capture)
        activation = capture[last_spatial_key(toy_config)]
        assert activation.shape == (2, 4, 8, 4)

    def test_gradiente(self, toy_config, chain_topology, rng):
        """Gradiente de mean(saída) em x e em todos os parâmetros."""
        params = init_stgcn_params(toy_config, rng)
        for name in params:
            if name.endswith("bias"):
                params[name].data = rng.normal(size=params[name].shape) * 0.1
        adjacency = build_adjacency(chain_topology)
        x = Tensor(rng.normal(size=(2, 3, 6, 4)))

        def f(inputs):
            return mean(stgcn_forward(inputs[0], params, adjacency, toy_config))

        assert finite_diff_check(f, [x, *params.values()]) < 1e-4

    def test_invariante_a_renumeracao_das_juntas(self, toy_config, default_topology, rng):
        """Renumerar juntas na entrada e na adjacência não muda o pooling."""
        params = init_stgcn_params(toy_config, rng)
        x = rng.normal(size=(2, 3, 8, default_topology.n_joints))
        permutation = rng.permutation(default_topology.n_joints)
        relabeled = default_topology.relabel(permutation.tolist())
        x_relabeled = np.empty_like(x)
        x_relabeled[..., permutation] = x

        original = stgcn_forward(Tensor(x), params, build_adjacency(default_topology), toy_config)
        permuted = stgcn_forward(
            Tensor(x_relabeled), params, build_adjacency(relabeled), toy_config
        )
        assert relabeled.root == permutation[default_topology.root]
        np.testing.assert_allclose(permuted.data, original.data, atol=1e-12)


class TestGaussianHead:
    """Testes para a cabeça gaussiana."""

    def test_pesos_nulos(self, rng):
        """W = 0, b = 0 → μ = 0 e log σ² = 0."""
        zeros = Tensor(np.zeros((4, 3)))
        head = GaussianHead(zeros, Tensor(np.zeros(3)), zeros, Tensor(np.zeros(3)))
        mu, logvar = gaussian_head_forward(Tensor(rng.normal(size=4)), head)
        np.testing.assert_array_equal(mu.data, np.zeros(3))
        np.testing.assert_array_equal(logvar.data, np.zeros(3))

    def test_identidade(self, rng):
        """Pesos identidade com d = F → μ = h."""
        h = rng.normal(size=4)
        head = GaussianHead(
            Tensor(np.eye(4)), Tensor(np.zeros(4)), Tensor(np.eye(4)), Tensor(np.zeros(4))
        )
        mu, _ = gaussian_head_forward(Tensor(h), head)
        np.testing.assert_allclose(mu.data, h)

    def test_logvar_recortado(self):
        """log σ² é recortado em [−10, 10]."""
        head = GaussianHead(
            Tensor(np.zeros((1, 2))),
            Tensor(np.zeros(2)),
            Tensor(np.zeros((1, 2))),
            Tensor([50.0, -50.0]),
        )
        _, logvar = gaussian_head_forward(Tensor([1.0]), head)
        assert logvar.data.tolist() == [10.0, -10.0]

    def test_cabeca_deterministica(self):
        """Sem ramo de variância não há log σ²."""
        head = GaussianHead(Tensor(np.eye(2)), Tensor(np.zeros(2)))
        with pytest.raises(ContractError):
            gaussian_head_forward(Tensor([1.0, 2.0]), head)

    def test_gradiente(self, rng):
        """Gradiente pelas duas saídas."""
        tensors = [
            Tensor(rng.normal(size=(2, 5))),
            Tensor(rng.normal(size=(5, 3)) * 0.5),
            Tensor(rng.normal(size=3)),
            Tensor(rng.normal(size=(5, 3)) * 0.5),
            Tensor(rng.normal(size=3)),
        ]
        weights = rng.normal(size=(2, 3))

        def f(xs):
            h, mw, mb, lw, lb = xs
            mu, logvar = gaussian_head_forward(h, GaussianHead(mw, mb, lw, lb))
            return reduce_sum(mu * Tensor(weights) + logvar * logvar)

        assert finite_diff_check(f, tensors) < 1e-5


class TestReparameterize:
    """Testes para reparameterize."""

    def test_ruido_nulo(self, rng):
        """ξ = 0 → z = μ."""
        mu = rng.normal(size=4)
        z = reparameterize(Tensor(mu), Tensor(rng.normal(size=4)), np.zeros(4))
        np.testing.assert_array_equal(z.data, mu)

    def test_valor(self):
        """μ = 2, log σ² = 0, ξ = 1 → z = 3."""
        assert reparameterize(Tensor([2.0]), Tensor([0.0]), np.ones(1)).data.tolist() == [3.0]

    def test_momentos_empiricos(self, rng):
        """μ = 1, log σ² = log 4 → média 1 e desvio 2."""
        n = 100_000
        z = reparameterize(
            Tensor(np.ones(n)), Tensor(np.full(n, np.log(4.0))), rng.standard_normal(n)
        ).data
        assert abs(z.mean() - 1.0) < 0.02
        assert abs(z.std() - 2.0) < 0.02

    def test_formas_diferentes(self):
        """μ, log σ² e ξ com formas distintas."""
        with pytest.raises(DimensionError):
            reparameterize(Tensor(np.zeros(3)), Tensor(np.zeros(3)), np.zeros(4))


class TestSkeletonEncoder:
    """Testes para SkeletonEncoder."""

    def test_inicializacao_deterministica(self, toy_config, chain_topology):
        """Mesma seed, mesmos parâmetros."""
        adjacency = build_adjacency(chain_topology)
        a = SkeletonEncoder.initialize(toy_config, adjacency, seed=3)
        b = SkeletonEncoder.initialize(toy_config, adjacency, seed=3)
        for x, y in zip(a.params.values(), b.params.values()):
            np.testing.assert_array_equal(x.data, y.data)

    def test_variante_deterministica(self, toy_config, chain_topology, rng):
        """Sem cabeça gaussiana: apenas μ."""
        encoder = SkeletonEncoder.initialize(
            toy_config, build_adjacency(chain_topology), 0, variational=False
        )
        assert "head.logvar.weight" not in encoder.params
        mu, logvar = encoder.embed(rng.normal(size=(2, 3, 8, 4)))
        assert mu.shape == (2, 3)
        assert logvar is None

    def test_embed_mean_em_fatias(self, toy_encoder, rng):
        """embed_mean em fatias igual ao embed direto."""
        batch = rng.normal(size=(5, 3, 8, 4))
        direct, _ = toy_encoder.embed(batch)
        np.testing.assert_allclose(
            toy_encoder.embed_mean(batch, batch_size=2), direct.data, atol=1e-12
        )

    def test_clone_independente(self, toy_encoder):
        """Clonar copia os dados."""
        clone = toy_encoder.clone()
        name = next(iter(clone.params))
        clone.params[name].data = clone.params[name].data + 1.0
        assert not np.array_equal(clone.params[name].data, toy_encoder.params[name].data)

    def test_gradiente_ponta_a_ponta(self, toy_encoder, rng):
        """Entrada → encoder → cabeça → amostra → perda total."""
        x = Tensor(rng.normal(size=(2, 3, 6, 4)))
        xi = rng.standard_normal((2, 3))
        z_k = rng.normal(size=(2, 3))
        z_k = Tensor(z_k / np.linalg.norm(z_k, axis=1, keepdims=True))
        mu_k = Tensor(rng.normal(size=(2, 3)))
        logvar_k = Tensor(rng.normal(size=(2, 3)) * 0.1)
        negatives = rng.normal(size=(5, 3))
        params = list(toy_encoder.params.values())

        def f(inputs):
            mu, logvar = toy_encoder.embed(inputs[0])
            z_q = l2_normalize(reparameterize(mu, logvar, xi), axis=-1)
            return vcl_objective(z_q, z_k, negatives, 0.2, mu, logvar, mu_k, logvar_k).total

        assert finite_diff_check(f, [x, *params]) < 1e-4


class TestParamSet:
    """Testes para ParamSet."""

    def test_estrutura_diferente(self):
        """Nomes diferentes violam o contrato."""
        a = ParamSet({"w": Tensor(np.zeros(2))})
        b = ParamSet({"v": Tensor(np.zeros(2))})
        with pytest.raises(ContractError):
            a.require_same_structure(b)

    def test_nome_repetido(self):
        """add não aceita nome repetido."""
        params = ParamSet({"w": Tensor(np.zeros(2))})
        with pytest.raises(ContractError):
            params.add("w", Tensor(np.zeros(2)))

    def test_ida_e_volta_em_arrays(self, toy_config):
        """to_arrays/from_arrays preservam ordem e valores."""
        params = init_stgcn_params(toy_config, np.random.default_rng(1))
        restored = ParamSet.from_arrays(params.to_arrays())
        assert restored.structure() == params.structure()
        assert restored.squared_distance(params) == 0.0

    def test_config_invalida(self):
        """Configuração do encoder validada na construção."""
        with pytest.raises(ValueError):
            STGCNConfig(widths=[], strides=[])
