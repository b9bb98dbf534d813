"""
Testes de integração da CLI (Typer CliRunner).
"""

from pathlib import Path

import pytest
from typer.testing import CliRunner

from src.cli import EXIT_RUNTIME, EXIT_USAGE, app
from src.storage import MetricsStore, TextStore, load_dataset

runner = CliRunner()

# Execução mínima: 3 classes × 10 amostras, 12 quadros
TINY_SETS = [
    "--set", "data.frames=12",
    "--set", "encoder.embed_dim=8",
    "--set", "contrastive.queue_size=16",
    "--set", "train.batch_size=8",
    "--set", "train.milestone=none",
    "--set", "eval.batch_size=8",
    "--set", "eval.milestone=none",
]


def _gen_data(path: Path, *extra: str):
    return runner.invoke(
        app,
        ["gen-data", "-o", str(path), "--classes", "3", "--per-class", "10", "--frames", "12"]
        + list(extra),
    )


def _saliency_args(pipeline: dict[str, Path], checkpoint: str) -> list[str]:
    return ["saliency", str(pipeline["out"] / checkpoint), str(pipeline["data"])]


@pytest.fixture(scope="module")
def pipeline(tmp_path_factory) -> dict[str, Path]:
    """gen-data → pré-treino 2 épocas → linear 2 épocas no mesmo diretório."""
    root = tmp_path_factory.mktemp("cli")
    data = root / "synth.skl"
    out = root / "smoke"
    results = {
        "gen": _gen_data(data),
        "pretrain": runner.invoke(
            app,
            ["run", "--protocol", "pretrain", "--epochs", "2", "-o", str(out),
             "--set", f"data.path={data}", *TINY_SETS],
        ),
        "linear": runner.invoke(
            app,
            ["run", "--protocol", "linear", "--epochs", "2", "-c", str(out), "-o", str(out),
             "--set", f"data.path={data}", *TINY_SETS],
        ),
    }
    return {"root": root, "data": data, "out": out, **results}


class TestGenData:
    """Testes do comando gen-data."""

    def test_bytes_identicos(self, tmp_path):
        """Mesmos argumentos → arquivos idênticos com 400 amostras."""
        args = ["--classes", "8", "--per-class", "50", "--frames", "12", "--seed", "7"]
        first = runner.invoke(app, ["gen-data", "-o", str(tmp_path / "a.skl"), *args])
        second = runner.invoke(app, ["gen-data", "-o", str(tmp_path / "b.skl"), *args])

        assert first.exit_code == 0, first.output
        assert second.exit_code == 0, second.output
        assert (tmp_path / "a.skl").read_bytes() == (tmp_path / "b.skl").read_bytes()
        assert len(load_dataset(tmp_path / "a.skl")) == 400

    def test_manifesto(self, tmp_path):
        """--manifest grava topologia e classes."""
        result = _gen_data(tmp_path / "d.skl", "--manifest", str(tmp_path / "m.txt"))
        assert result.exit_code == 0, result.output
        assert "class action_00" in (tmp_path / "m.txt").read_text(encoding="utf-8")

    def test_topologia_desconhecida(self, tmp_path):
        """Topologia inexistente → erro de uso."""
        result = _gen_data(tmp_path / "x.skl", "--topology", "nenhuma")
        assert result.exit_code == EXIT_USAGE


class TestRun:
    """Testes do comando run."""

    def test_chave_desconhecida(self, tmp_path):
        """Chave desconhecida → saída 2 citando a chave."""
        result = runner.invoke(app, ["run", "-o", str(tmp_path / "x"), "--set", "bogus_key=1"])
        assert result.exit_code == EXIT_USAGE
        assert "bogus_key" in result.output

    def test_linear_sem_checkpoint(self, tmp_path):
        """Protocolo linear sem checkpoint → saída 2."""
        result = runner.invoke(app, ["run", "--protocol", "linear", "-o", str(tmp_path / "x")])
        assert result.exit_code == EXIT_USAGE

    def test_arquivo_de_configuracao_invalido(self, tmp_path):
        """Linha sem '=' → saída 2."""
        config = tmp_path / "bad.cfg"
        config.write_text("seed 3\n", encoding="utf-8")
        result = runner.invoke(app, ["run", str(config)])
        assert result.exit_code == EXIT_USAGE

    def test_dataset_inexistente(self, tmp_path):
        """data.path ausente → saída 1 com o caminho, sem traceback."""
        missing = tmp_path / "nada.skl"
        result = runner.invoke(
            app, ["run", "-o", str(tmp_path / "x"), "--set", f"data.path={missing}", *TINY_SETS]
        )
        assert result.exit_code == EXIT_RUNTIME
        assert "DataFormatError" in result.output
        assert "Traceback" not in result.output

    def test_checkpoint_inexistente(self, tmp_path):
        """-c apontando para arquivo ausente → saída 1, sem traceback."""
        data = tmp_path / "synth.skl"
        assert _gen_data(data).exit_code == 0
        result = runner.invoke(
            app,
            ["run", "--protocol", "linear", "-c", str(tmp_path / "nada.vclc"),
             "-o", str(tmp_path / "x"), "--set", f"data.path={data}", *TINY_SETS],
        )
        assert result.exit_code == EXIT_RUNTIME
        assert "Traceback" not in result.output

    def test_pipeline_smoke(self, pipeline):
        """Três comandos com sucesso e 4 registros de métricas."""
        for step in ("gen", "pretrain", "linear"):
            assert pipeline[step].exit_code == 0, pipeline[step].output
        records = MetricsStore().read(pipeline["out"] / "metrics.jsonl")
        assert len(records) == 4
        assert [r.protocol for r in records] == ["pretrain", "pretrain", "linear", "linear"]
        assert (pipeline["out"] / "resolved.cfg").exists()


class TestSaliencyCommand:
    """Testes do comando saliency."""

    def test_mapa_gravado(self, pipeline):
        """Mapa T×N em [0, 1]."""
        output = pipeline["root"] / "saliency.csv"
        result = runner.invoke(
            app,
            [*_saliency_args(pipeline, "linear.vclc"), "--index", "3", "-o", str(output)],
        )
        assert result.exit_code == 0, result.output
        importance = TextStore().read_matrix(output)
        assert importance.shape == (12, 17)
        assert importance.min() >= 0.0
        assert importance.max() <= 1.0

    def test_indice_fora_do_intervalo(self, pipeline):
        """Índice inexistente → saída 2."""
        never = pipeline["root"] / "never.csv"
        result = runner.invoke(
            app,
            [*_saliency_args(pipeline, "linear.vclc"), "--index", "999", "-o", str(never)],
        )
        assert result.exit_code == EXIT_USAGE

    def test_checkpoint_sem_classificador(self, pipeline):
        """Checkpoint de pré-treino não tem classificador → saída 2."""
        never = pipeline["root"] / "never.csv"
        result = runner.invoke(
            app,
            [*_saliency_args(pipeline, "pretrain.vclc"), "-o", str(never)],
        )
        assert result.exit_code == EXIT_USAGE


class TestDumpEmbeddings:
    """Testes do comando dump-embeddings."""

    def test_uma_linha_por_amostra(self, pipeline):
        """Cabeçalho mais 30 linhas, repetível byte a byte."""
        first = pipeline["root"] / "mu_a.csv"
        second = pipeline["root"] / "mu_b.csv"
        checkpoint = str(pipeline["out"] / "pretrain.vclc")
        for path in (first, second):
            result = runner.invoke(
                app, ["dump-embeddings", checkpoint, str(pipeline["data"]), "-o", str(path)]
            )
            assert result.exit_code == 0, result.output

        lines = first.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "label,dim=8"
        assert len(lines) == 31
        assert first.read_bytes() == second.read_bytes()


class TestVersion:
    """Testes do comando version."""

    def test_versao(self):
        """Exibe o nome e a versão."""
        result = runner.invoke(app, ["version"])
        assert result.exit_code == 0
        assert "Skeleton VCL" in result.output


class TestHelp:
    """Textos de ajuda dos comandos."""

    @pytest.mark.parametrize("command", ["run", "fuse", "ablation"])
    def test_acentuacao_da_opcao_set(self, command):
        """--set descrito como repetível, sem caracteres corrompidos."""
        result = runner.invoke(app, [command, "--help"])
        assert result.exit_code == 0
        assert "repetível" in result.output
        assert "Ã" not in result.output
