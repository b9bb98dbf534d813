"""
Testes unitários da configuração: leitura do formato chave = valor,
presets, hash, settings de processo e logging.
"""

import json
from pathlib import Path

import numpy as np
import pytest
import structlog

from config import logging_config
from config.logging_config import (
    LOG_FILENAME,
    get_logger,
    numpy_values,
    round_floats,
    run_context,
    setup_logging,
)
from config.presets import ENCODER_PRESETS, RUN_PRESETS, encoder_config
from config.run_config import (
    build_run_config,
    config_hash,
    dump_resolved,
    load_run_config,
    parse_config_text,
)
from config.settings import Settings
from src.core.exceptions import ConfigError
from src.core.types import EncoderPreset, Protocol, RunPreset, Stream


class TestParseConfigText:
    """Testes para parse_config_text."""

    def test_linhas_e_comentarios(self):
        """Testa chaves, comentários e valores nulos."""
        text = """
        # experimento
        protocol = linear   # comentário
        eval.checkpoint = none
        contrastive.temperature=0.1
        """
        values = parse_config_text(text)
        assert values == {
            "protocol": "linear",
            "eval.checkpoint": None,
            "contrastive.temperature": "0.1",
        }

    def test_linha_sem_igual(self):
        """Linha sem '=' é erro de configuração."""
        with pytest.raises(ConfigError):
            parse_config_text("protocol linear")

    def test_chave_repetida(self):
        """Chave repetida é rejeitada com o nome."""
        with pytest.raises(ConfigError) as exc:
            parse_config_text("seed = 1\nseed = 2")
        assert exc.value.key == "seed"


class TestBuildRunConfig:
    """Testes para build_run_config."""

    def test_padroes_do_preset_desk(self):
        """Sem valores, o preset desk é aplicado."""
        config = build_run_config()
        assert config.preset is RunPreset.DESK
        assert config.contrastive.queue_size == 512
        assert config.contrastive.momentum == 0.99
        assert config.train.epochs == 30
        assert config.train.milestone == 25
        assert config.fusion.weights == [0.6, 0.6, 0.4]

    def test_preset_paper(self):
        """O preset paper fixa a receita completa."""
        config = build_run_config({"preset": "paper"})
        assert config.contrastive.queue_size == 30000
        assert config.contrastive.momentum == 0.999
        assert config.train.epochs == 300
        assert config.train.milestone == 250
        assert config.eval.lr == 0.03
        assert config.train.weight_decay == 1e-4
        assert config.encoder.preset is EncoderPreset.PAPER_QUARTER

    def test_precedencia(self):
        """Preset < defaults < arquivo < flags."""
        config = build_run_config(
            {"seed": "3", "workers": "4"},
            {"seed": "5"},
            defaults={"workers": "2", "train.epochs": "7"},
        )
        assert config.seed == 5
        assert config.workers == 4
        assert config.train.epochs == 7

    def test_chave_desconhecida(self):
        """Chave desconhecida é rejeitada e nomeada."""
        with pytest.raises(ConfigError) as exc:
            build_run_config({"contrastive.temprature": "0.1"})
        assert "contrastive.temprature" in exc.value.key

    def test_valor_fora_do_intervalo(self):
        """Temperatura ≤ 0 é inválida."""
        with pytest.raises(ConfigError) as exc:
            build_run_config({"contrastive.temperature": "0"})
        assert exc.value.key == "contrastive.temperature"

    def test_downstream_exige_checkpoint(self):
        """Protocolo linear sem checkpoint é erro de configuração."""
        with pytest.raises(ConfigError) as exc:
            build_run_config({"protocol": "linear"})
        assert exc.value.key == "eval.checkpoint"

    def test_downstream_sem_exigencia(self):
        """require_checkpoint=False permite resolver sem checkpoint."""
        config = build_run_config({"protocol": "semi"}, require_checkpoint=False)
        assert config.protocol is Protocol.SEMI

    def test_preset_desconhecido(self):
        """Preset inexistente é rejeitado."""
        with pytest.raises(ConfigError):
            build_run_config({"preset": "huge"})

    def test_pesos_de_fusao(self):
        """Pesos aceitam lista separada por vírgulas e exigem três valores."""
        config = build_run_config({"fusion.weights": "1,1,0.5", "stream": "all"})
        assert config.fusion.weights == [1.0, 1.0, 0.5]
        assert config.stream is Stream.ALL
        with pytest.raises(ConfigError):
            build_run_config({"fusion.weights": "1,1"})


class TestLoadRunConfig:
    """Testes para load_run_config e a serialização canônica."""

    def test_arquivo_ausente(self, tmp_path):
        """Arquivo ilegível vira ConfigError."""
        with pytest.raises(ConfigError):
            load_run_config(tmp_path / "nao_existe.cfg")

    def test_resolvido_relido_e_identico(self, tmp_path):
        """dump_resolved relido produz a mesma configuração."""
        config = build_run_config({"seed": "9", "stream": "bone", "output_dir": "runs/x"})
        path = tmp_path / "resolved.cfg"
        path.write_text(dump_resolved(config), encoding="utf-8")
        reloaded = load_run_config(path)
        assert reloaded == config
        assert dump_resolved(reloaded) == dump_resolved(config)


class TestConfigHash:
    """Testes para config_hash."""

    def test_estavel(self):
        """Mesma configuração, mesmo hash de 64 bits."""
        a = config_hash(build_run_config({"seed": "1"}))
        b = config_hash(build_run_config({"seed": "1"}))
        assert a == b
        assert 0 <= a < 2**64

    def test_sensivel_a_hiperparametros(self):
        """Mudar τ muda o hash."""
        base = config_hash(build_run_config())
        changed = config_hash(build_run_config({"contrastive.temperature": "0.2"}))
        assert base != changed

    def test_ignora_chaves_de_execucao(self):
        """Saída, workers, épocas e caminhos não entram no hash."""
        base = config_hash(build_run_config())
        other = config_hash(
            build_run_config(
                {
                    "output_dir": "elsewhere",
                    "workers": "8",
                    "train.epochs": "99",
                    "train.resume": "runs/a/pretrain.vclc",
                }
            )
        )
        assert base == other


class TestPresets:
    """Testes para os presets de encoder."""

    def test_desk(self):
        """Preset desk: quatro blocos."""
        config = ENCODER_PRESETS[EncoderPreset.DESK]
        assert len(config.widths) == 4
        assert config.kernel % 2 == 1

    def test_embed_dim_sobrescrito(self):
        """encoder_config troca apenas d."""
        config = encoder_config(EncoderPreset.DESK, 32)
        assert config.embed_dim == 32
        assert config.widths == ENCODER_PRESETS[EncoderPreset.DESK].widths

    def test_presets_de_execucao_completos(self):
        """Os dois presets definem as mesmas chaves."""
        assert set(RUN_PRESETS[RunPreset.DESK]) == set(RUN_PRESETS[RunPreset.PAPER])


class TestSettings:
    """Testes para Settings."""

    def test_variaveis_de_ambiente(self, monkeypatch, tmp_path):
        """Prefixo VCL_ é lido do ambiente."""
        monkeypatch.setenv("VCL_WORKERS", "3")
        monkeypatch.setenv("VCL_OUTPUT_ROOT", str(tmp_path))
        settings = Settings()
        assert settings.workers == 3
        assert settings.resolve_output(Path("runs/a")) == tmp_path / "runs/a"

    def test_saida_absoluta_preservada(self, tmp_path):
        """Caminho absoluto ignora output_root."""
        settings = Settings(output_root=Path("/outro"))
        assert settings.resolve_output(tmp_path) == tmp_path


class TestLogging:
    """Testes dos processadores e do contexto de logging."""

    def test_valores_numpy_convertidos(self):
        """Escalares viram float/int; vetores longos viram resumo de forma."""
        event = numpy_values(
            None,
            "info",
            {
                "loss": np.float64(0.25),
                "step": np.int64(3),
                "shape": np.array([2, 3]),
                "big": np.zeros((4, 5)),
                "path": Path("runs/a"),
            },
        )
        assert event["loss"] == 0.25 and type(event["loss"]) is float
        assert event["step"] == 3 and type(event["step"]) is int
        assert event["shape"] == [2, 3]
        assert event["big"] == "ndarray[4, 5]"
        assert event["path"] == str(Path("runs/a"))

    def test_floats_arredondados(self):
        """Console mostra seis casas; outros tipos intactos."""
        event = round_floats(None, "info", {"top1": 0.123456789, "epoch": 2})
        assert event == {"top1": 0.123457, "epoch": 2}

    def test_contexto_da_execucao(self):
        """run_context vale só dentro do bloco."""
        with run_context(seed=np.int64(7), protocol="linear"):
            bound = structlog.contextvars.get_contextvars()
            assert bound["seed"] == 7
            assert bound["protocol"] == "linear"
        assert "seed" not in structlog.contextvars.get_contextvars()

    def test_arquivo_em_json(self, tmp_path):
        """Com log_path os eventos vão em JSON para o arquivo."""
        try:
            setup_logging(level="INFO", log_path=tmp_path)
            with run_context(stream="bone"):
                get_logger("teste").info("Época concluída", loss=np.float64(0.5))
            lines = (tmp_path / LOG_FILENAME).read_text(encoding="utf-8").splitlines()
            event = json.loads(lines[-1])
            assert event["event"] == "Época concluída"
            assert event["loss"] == 0.5
            assert event["stream"] == "bone"
        finally:
            setup_logging(level="WARNING")

    def test_reconfigurar_fecha_arquivo_anterior(self, tmp_path):
        """Segunda chamada fecha o arquivo da primeira; sem log_path nada fica aberto."""
        try:
            setup_logging(level="INFO", log_path=tmp_path / "a")
            first = logging_config._file_sink
            setup_logging(level="INFO", log_path=tmp_path / "b")
            second = logging_config._file_sink
            assert first.closed
            assert not second.closed

            get_logger("teste").info("Depois da troca")
            assert (tmp_path / "a" / LOG_FILENAME).read_text(encoding="utf-8") == ""
            assert "Depois da troca" in (tmp_path / "b" / LOG_FILENAME).read_text(
                encoding="utf-8"
            )

            setup_logging(level="INFO")
            assert second.closed
            assert logging_config._file_sink is None
        finally:
            setup_logging(level="WARNING")
