"""Content-addressed page archive on the local filesystem."""
import hashlib
import pathlib


class PageStore:
    def __init__(self, archive_root):
        self.archive_root = pathlib.Path(archive_root)
        self.archive_root.mkdir(parents=True, exist_ok=True)

    def store_page(self, page_url, page_content):
        digest_value = hashlib.sha256(page_content.encode()).hexdigest()
        archive_path = self.archive_root / digest_value[:2] / digest_value
        archive_path.parent.mkdir(exist_ok=True)
        archive_path.write_text(page_content)
        return str(archive_path)
