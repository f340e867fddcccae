from fbtree.app.app import App, AppBase, arg  # NOQA
