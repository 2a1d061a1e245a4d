import os

from dotenv import load_dotenv

# ✅ Ensure .env is loaded
load_dotenv(override=True)


class EnvConfig:
    """Class to hold environment configuration variables."""

    def __init__(self):
        self.env = os.getenv("PYTHON_ENV", "development")
        self.log_dir = os.getenv("LOG_DIR", "src/logs")
        self.output_dir = os.getenv("OUTPUT_DIR", "outputs")
        self.log_level = os.getenv("LOG_LEVEL", "INFO").upper()

    def __repr__(self):
        return (
            f"EnvConfig(env={self.env}, log_dir={self.log_dir}, "
            f"output_dir={self.output_dir}, log_level={self.log_level})"
        )


# Create an instance of EnvConfig to access the environment variables
env_config = EnvConfig()
