"""
Testes de integração para o Storage.
"""

import numpy as np
import pytest

from src.core.exceptions import ContractError, DataFormatError
from src.core.models import MetricsRecord
from src.core.types import Protocol, Stream
from src.storage import (
    CheckpointBundle,
    MetricsStore,
    StorageManager,
    TextStore,
    export_manifest,
    load_checkpoint,
    load_dataset,
    read_manifest,
    resolve_checkpoint,
    save_checkpoint,
    save_dataset,
)


class TestDatasetStore:
    """Testes de integração para o formato SKL1."""

    def test_ida_e_volta_bit_a_bit(self, small_dataset, temp_data_dir):
        """save → load → save produz bytes idênticos."""
        first = save_dataset(small_dataset, temp_data_dir / "a.skl")
        loaded = load_dataset(first)
        second = save_dataset(loaded, temp_data_dir / "b.skl")

        assert first.read_bytes() == second.read_bytes()
        np.testing.assert_array_equal(loaded.labels, small_dataset.labels)
        np.testing.assert_array_equal(loaded.subjects, small_dataset.subjects)
        assert loaded.topology.edges == small_dataset.topology.edges
        np.testing.assert_array_equal(loaded.samples[5].coords, small_dataset.samples[5].coords)

    def test_magic_corrompido(self, small_dataset, temp_data_dir):
        """Magic inválido → DataFormatError no offset 0."""
        path = save_dataset(small_dataset, temp_data_dir / "bad.skl")
        data = bytearray(path.read_bytes())
        data[0:4] = b"XXXX"
        path.write_bytes(bytes(data))

        with pytest.raises(DataFormatError) as exc_info:
            load_dataset(path)
        assert exc_info.value.offset == 0

    def test_arquivo_truncado(self, small_dataset, temp_data_dir):
        """Payload incompleto → DataFormatError."""
        path = save_dataset(small_dataset, temp_data_dir / "short.skl")
        path.write_bytes(path.read_bytes()[:-8])
        with pytest.raises(DataFormatError):
            load_dataset(path)

    def test_bytes_sobrando(self, small_dataset, temp_data_dir):
        """Bytes após a última amostra → DataFormatError."""
        path = save_dataset(small_dataset, temp_data_dir / "long.skl")
        path.write_bytes(path.read_bytes() + b"\x00")
        with pytest.raises(DataFormatError):
            load_dataset(path)

    def test_manifesto(self, small_dataset, temp_data_dir):
        """Manifesto preserva topologia e nomes de classe."""
        manifest = export_manifest(small_dataset, temp_data_dir / "manifest.txt")
        topology, names = read_manifest(manifest)
        assert topology.edges == small_dataset.topology.edges
        assert names == small_dataset.class_names

        path = save_dataset(small_dataset, temp_data_dir / "data.skl")
        assert load_dataset(path, manifest).class_names == small_dataset.class_names

    def test_arquivo_inexistente(self, temp_data_dir):
        """Dataset ou manifesto ausente → DataFormatError com o caminho."""
        missing = temp_data_dir / "nada.skl"
        with pytest.raises(DataFormatError) as excinfo:
            load_dataset(missing)
        assert excinfo.value.path == str(missing)
        assert isinstance(excinfo.value.cause, FileNotFoundError)

        with pytest.raises(DataFormatError):
            read_manifest(temp_data_dir / "nada.txt")


class TestCheckpointStore:
    """Testes de integração para o formato VCLC."""

    def test_ida_e_volta(self, temp_data_dir, rng):
        """Hash, nomes, formas e valores preservados na ordem de inserção."""
        bundle = CheckpointBundle(config_hash=0xDEADBEEF12345678)
        bundle.put("blocks.0.spatial.weight", rng.normal(size=(4, 3)))
        bundle.put("step", [7.0])
        bundle.put_group(
            "queue", {"entries": rng.normal(size=(5, 2)), "counters": np.array([5.0, 9.0])}
        )

        loaded = load_checkpoint(save_checkpoint(bundle, temp_data_dir / "run.vclc"))
        assert loaded.config_hash == bundle.config_hash
        assert list(loaded) == list(bundle)
        for name in bundle:
            np.testing.assert_array_equal(loaded.get(name), bundle.get(name))
        assert loaded.integers("queue.counters") == [5, 9]
        assert loaded.has_group("queue")
        assert set(loaded.group("queue")) == {"entries", "counters"}

    def test_tensor_ausente(self):
        """get de nome inexistente → ContractError."""
        with pytest.raises(ContractError):
            CheckpointBundle(config_hash=1).get("nada")

    def test_magic_corrompido(self, temp_data_dir):
        """Magic inválido → DataFormatError."""
        path = save_checkpoint(CheckpointBundle(config_hash=1), temp_data_dir / "x.vclc")
        path.write_bytes(b"SKL1" + path.read_bytes()[4:])
        with pytest.raises(DataFormatError):
            load_checkpoint(path)

    def test_arquivo_inexistente(self, temp_data_dir):
        """Checkpoint ausente → DataFormatError com o caminho."""
        missing = temp_data_dir / "nada.vclc"
        with pytest.raises(DataFormatError) as excinfo:
            load_checkpoint(missing)
        assert excinfo.value.path == str(missing)
        assert excinfo.value.details["type"] == "checkpoint"


class TestMetricsStore:
    """Testes para métricas em JSON lines."""

    def test_append_e_leitura(self, temp_data_dir):
        """Registros acrescentados voltam na mesma ordem, com nulos preservados."""
        store = MetricsStore()
        path = temp_data_dir / "metrics.jsonl"
        first = MetricsRecord(
            epoch=0, split="train", protocol="pretrain",
            loss_total=1.5, loss_infonce=1.0, loss_kl_q=0.3, loss_kl_k=0.2,
        )
        second = MetricsRecord(epoch=0, split="test", protocol="linear", ce_loss=0.7, top1=0.5)

        assert store.append(path, [first]) == 1
        assert store.append(path, [second]) == 1
        records = store.read(path)
        assert records == [first, second]
        assert records[1].loss_total is None
        assert '"loss_total":null' in path.read_text(encoding="utf-8").splitlines()[1]

    def test_dataframe(self, temp_data_dir):
        """Uma linha do DataFrame por registro."""
        store = MetricsStore()
        path = temp_data_dir / "metrics.jsonl"
        records = [
            MetricsRecord(epoch=i, split="test", protocol="linear", top1=0.1 * i) for i in range(3)
        ]
        store.append(path, records)
        frame = store.to_dataframe(path)
        assert len(frame) == 3
        assert frame["epoch"].tolist() == [0, 1, 2]

    def test_linha_invalida(self, temp_data_dir):
        """Linha que não é um registro → DataFormatError."""
        path = temp_data_dir / "metrics.jsonl"
        path.write_text('{"epoch": -1}\n', encoding="utf-8")
        with pytest.raises(DataFormatError):
            MetricsStore().read(path)


class TestTextStore:
    """Testes para dumps em texto."""

    def test_embeddings(self, temp_data_dir, rng):
        """Cabeçalho label,dim=d e floats relidos exatamente."""
        store = TextStore()
        vectors = rng.normal(size=(4, 3))
        path = store.write_embeddings(temp_data_dir / "emb.csv", [0, 2, 1, 0], vectors)

        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "label,dim=3"
        assert len(lines) == 5
        labels, loaded = store.read_embeddings(path)
        assert labels == [0, 2, 1, 0]
        np.testing.assert_array_equal(loaded, vectors)

    def test_embeddings_desalinhados(self, temp_data_dir):
        """Rótulos e vetores em quantidades diferentes."""
        with pytest.raises(ContractError):
            TextStore().write_embeddings(temp_data_dir / "e.csv", [0], np.zeros((2, 3)))

    def test_matriz(self, temp_data_dir, rng):
        """Matriz T×N relida exatamente."""
        store = TextStore()
        matrix = rng.uniform(size=(5, 17))
        np.testing.assert_array_equal(
            store.read_matrix(store.write_matrix(temp_data_dir / "m.csv", matrix)), matrix
        )

    def test_matriz_em_texto(self, temp_data_dir):
        """Floats gravados no decimal mais curto, uma linha por linha."""
        matrix = np.array([[0.1, 1.0], [2.5, -3.0]])
        path = TextStore().write_matrix(temp_data_dir / "m.csv", matrix)
        assert path.read_text(encoding="utf-8") == "0.1,1.0\n2.5,-3.0\n"

    def test_embeddings_vazios(self, temp_data_dir):
        """Só o cabeçalho: zero linhas com a dimensão preservada."""
        store = TextStore()
        path = store.write_embeddings(temp_data_dir / "e.csv", [], np.zeros((0, 3)))
        labels, vectors = store.read_embeddings(path)
        assert labels == []
        assert vectors.shape == (0, 3)

    def test_embedding_com_campo_faltando(self, temp_data_dir):
        """Linha curta é erro de formato."""
        path = temp_data_dir / "e.csv"
        path.write_text("label,dim=2\n0,1.0,2.0\n1,3.0\n", encoding="utf-8")
        with pytest.raises(DataFormatError):
            TextStore().read_embeddings(path)

    def test_cabecalho_ausente(self, temp_data_dir):
        """Arquivo sem label,dim= no topo."""
        path = temp_data_dir / "e.csv"
        path.write_text("0,1.0\n", encoding="utf-8")
        with pytest.raises(DataFormatError):
            TextStore().read_embeddings(path)

    def test_arquivo_inexistente(self, temp_data_dir):
        """Matriz ou embeddings ausentes → DataFormatError."""
        store = TextStore()
        with pytest.raises(DataFormatError):
            store.read_matrix(temp_data_dir / "nada.csv")
        with pytest.raises(DataFormatError):
            store.read_embeddings(temp_data_dir / "nada.csv")


class TestStorageManager:
    """Testes para StorageManager."""

    def test_layout(self, temp_run_dir, tiny_run_config):
        """Caminhos de checkpoint, métricas e configuração resolvida."""
        manager = StorageManager(temp_run_dir)
        assert manager.checkpoint_path(Protocol.PRETRAIN).name == "pretrain.vclc"
        assert manager.for_stream(Stream.BONE).output_dir == temp_run_dir / "bone"
        assert manager.read_metrics() == []

        manager.write_resolved_config(tiny_run_config)
        assert manager.resolved_config_path.exists()

        record = MetricsRecord(epoch=0, split="test", protocol="linear", top1=1.0)
        manager.append_metric(record)
        assert manager.read_metrics() == [record]

    def test_resolve_checkpoint(self, temp_run_dir):
        """Diretório aponta para pretrain.vclc, inclusive por modalidade."""
        (temp_run_dir / "motion").mkdir()
        assert resolve_checkpoint(temp_run_dir) == temp_run_dir / "pretrain.vclc"
        expected = temp_run_dir / "motion" / "pretrain.vclc"
        assert resolve_checkpoint(temp_run_dir, Stream.MOTION) == expected
        assert resolve_checkpoint(temp_run_dir, Stream.BONE) == temp_run_dir / "pretrain.vclc"
        file_ref = temp_run_dir / "custom.vclc"
        assert resolve_checkpoint(file_ref) == file_ref
