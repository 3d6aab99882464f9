from expcli.cli import entrypoint

entrypoint()
