"""
Testes unitários dos modelos Pydantic e da hierarquia de exceções.
"""

import pytest
from pydantic import ValidationError

from src.core.exceptions import (
    CheckpointMismatchError,
    ConfigError,
    DataFormatError,
    DimensionError,
    InsufficientLabelsError,
    VCLError,
)
from src.core.models import AugmentationConfig, MetricsRecord, Schedule, STGCNConfig
from src.core.types import Stream


class TestSTGCNConfig:
    """Testes para STGCNConfig."""

    def test_criacao_valida(self):
        """Testa criação com dados válidos."""
        config = STGCNConfig(widths=[8, 16], kernel=5, strides=[1, 2], embed_dim=4)
        assert config.feature_dim == 16

    def test_listas_em_texto(self):
        """Listas aceitam texto separado por vírgulas."""
        config = STGCNConfig(widths="4,4", strides="1,2")
        assert config.widths == [4, 4]
        assert config.strides == [1, 2]

    def test_kernel_par_invalido(self):
        """Kernel par é rejeitado."""
        with pytest.raises(ValidationError):
            STGCNConfig(widths=[4], kernel=4, strides=[1])

    def test_strides_desalinhados(self):
        """strides e widths precisam do mesmo comprimento."""
        with pytest.raises(ValidationError):
            STGCNConfig(widths=[4, 4], strides=[1])

    def test_embed_dim_minimo(self):
        """d ≥ 2."""
        with pytest.raises(ValidationError):
            STGCNConfig(widths=[4], strides=[1], embed_dim=1)

    def test_imutavel(self):
        """Configuração congelada."""
        config = STGCNConfig(widths=[4], strides=[1])
        with pytest.raises(ValidationError):
            config.kernel = 3


class TestSchedule:
    """Testes para Schedule."""

    def test_decaimento_no_marco(self):
        """Fator aplicado a partir da própria época do marco."""
        schedule = Schedule.step_decay(0.001, 25)
        assert schedule.lr_at(0) == 0.001
        assert schedule.lr_at(24) == 0.001
        assert schedule.lr_at(25) == pytest.approx(0.0001)
        assert schedule.lr_at(29) == pytest.approx(0.0001)

    def test_sem_marco(self):
        """Milestone None mantém a taxa constante."""
        schedule = Schedule.step_decay(0.03, None)
        assert schedule.milestones == []
        assert schedule.lr_at(1000) == 0.03

    def test_varios_marcos(self):
        """Fatores se acumulam."""
        schedule = Schedule(base_lr=1.0, milestones=[(2, 0.5), (4, 0.1)])
        assert schedule.lr_at(3) == 0.5
        assert schedule.lr_at(4) == pytest.approx(0.05)

    def test_marcos_fora_de_ordem(self):
        """Marcos precisam ser estritamente crescentes."""
        with pytest.raises(ValidationError):
            Schedule(base_lr=1.0, milestones=[(4, 0.1), (2, 0.5)])

    def test_fator_nao_positivo(self):
        """Fator ≤ 0 é rejeitado."""
        with pytest.raises(ValidationError):
            Schedule(base_lr=1.0, milestones=[(2, 0.0)])


class TestMetricsRecord:
    """Testes para MetricsRecord."""

    def test_total_consistente(self):
        """Total igual à soma das componentes."""
        record = MetricsRecord(
            epoch=0,
            split="train",
            protocol="pretrain",
            loss_total=3.0,
            loss_infonce=2.5,
            loss_kl_q=0.25,
            loss_kl_k=0.25,
        )
        assert record.top1 is None

    def test_total_inconsistente(self):
        """Total diferente da soma é rejeitado."""
        with pytest.raises(ValidationError):
            MetricsRecord(
                epoch=0, split="train", protocol="pretrain", loss_total=3.0, loss_infonce=2.0
            )

    def test_top1_no_intervalo(self):
        """top1 ∈ [0, 1]."""
        with pytest.raises(ValidationError):
            MetricsRecord(epoch=0, split="test", protocol="linear", top1=1.5)

    def test_sem_tempo(self):
        """without_timing remove apenas seconds."""
        record = MetricsRecord(epoch=1, split="test", protocol="linear", top1=0.5, seconds=2.0)
        fields = record.without_timing()
        assert "seconds" not in fields
        assert fields["top1"] == 0.5


class TestAugmentationConfig:
    """Testes para AugmentationConfig."""

    def test_padroes(self):
        """β = 0.5 e γ = 6 por padrão."""
        config = AugmentationConfig()
        assert config.shear_amplitude == 0.5
        assert config.crop_padding_ratio == 6

    def test_razao_invalida(self):
        """γ ≥ 1."""
        with pytest.raises(ValidationError):
            AugmentationConfig(crop_padding_ratio=0)


class TestStream:
    """Testes para o enum de modalidades."""

    def test_ordem_de_fusao(self):
        """joint, bone, motion na ordem dos pesos."""
        assert Stream.singles() == [Stream.JOINT, Stream.BONE, Stream.MOTION]

    def test_codigo_ida_e_volta(self):
        """Código numérico gravado no checkpoint."""
        for stream in Stream.singles():
            assert Stream.from_code(stream.code) is stream


class TestExceptions:
    """Testes para a hierarquia de exceções."""

    def test_heranca(self):
        """Todas herdam de VCLError."""
        for error in (DimensionError("x"), ConfigError("x"), DataFormatError("x")):
            assert isinstance(error, VCLError)

    def test_to_dict(self):
        """to_dict carrega tipo, mensagem e detalhes."""
        error = ConfigError("Chave inválida", key="seed")
        info = error.to_dict()
        assert info["error_type"] == "ConfigError"
        assert info["details"] == {"key": "seed"}
        assert info["cause"] is None

    def test_dimension_error_detalhes(self):
        """Formas esperada e obtida nos detalhes."""
        error = DimensionError("Forma errada", expected=(3,), got=(4,))
        assert "expected" in error.details
        assert "got" in error.details
        assert "Forma errada" in str(error)

    def test_insufficient_labels(self):
        """Classe vazia registrada."""
        error = InsufficientLabelsError("vazia", class_index=2)
        assert error.details["class_index"] == 2

    def test_hash_em_hexadecimal(self):
        """Hashes divergentes formatados em 16 dígitos."""
        error = CheckpointMismatchError(expected_hash=1, found_hash=2)
        assert error.details == {
            "expected_hash": "0000000000000001",
            "found_hash": "0000000000000002",
        }
