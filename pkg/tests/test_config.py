from regforge.config import DEFAULT_PAIR_CAP, get_settings


def test_defaults(monkeypatch):
    for name in ("REGFORGE_PAIR_CAP", "REGFORGE_CAP_BITS", "REGFORGE_POLYAD_EDGE_CAP"):
        monkeypatch.delenv(name, raising=False)
    settings = get_settings()
    assert settings.pair_cap == DEFAULT_PAIR_CAP
    assert settings.polyad_edge_cap == 18


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("REGFORGE_PAIR_CAP", "10")
    monkeypatch.setenv("REGFORGE_EDIT_EDGE_CAP", "5")
    settings = get_settings()
    assert settings.pair_cap == 10
    assert settings.edit_edge_cap == 5


def test_cap_bits_overrides_enumeration_caps(monkeypatch):
    monkeypatch.setenv("REGFORGE_PAIR_CAP", "10")
    monkeypatch.setenv("REGFORGE_CAP_BITS", "7")
    settings = get_settings()
    caps = (settings.pair_cap, settings.polyad_edge_cap, settings.edit_edge_cap, settings.edit_cell_cap)
    assert caps == (7, 7, 7, 7)


def test_bad_integers_fall_back(monkeypatch):
    monkeypatch.delenv("REGFORGE_CAP_BITS", raising=False)
    monkeypatch.setenv("REGFORGE_PAIR_CAP", "lots")
    assert get_settings().pair_cap == DEFAULT_PAIR_CAP
