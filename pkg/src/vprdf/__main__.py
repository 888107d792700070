from src.vprdf.cli import app

if __name__ == '__main__':
    app(prog_name='vprdf')
