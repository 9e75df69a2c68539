import json
import os
import tempfile
from contextlib import suppress
from pathlib import Path

from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError

from BibundleApp import documents
from BibundleApp.exceptions import BibundleError, DocumentError, ShapeMismatch
from BibundleApp.models import Document

DB_PREFIX = 'db:'

# exit statuses
INVALID = 1
USAGE = 2


def resolve_stored(reference):
    """Look up ``db:<name>`` (or a bare name) among the stored documents."""
    name = reference[len(DB_PREFIX):] if reference.startswith(DB_PREFIX) else reference
    try:
        record = Document.objects.get(name=name)
    except Document.DoesNotExist:
        raise DocumentError(f'no stored document named "{name}"') from None
    return record.to_document(resolve_stored)


def write_atomic(path, text):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix='.bibundle-', suffix='.tmp')
    try:
        with os.fdopen(fd, 'w', encoding='utf-8') as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        with suppress(FileNotFoundError):
            os.unlink(tmp)
        raise


class DocumentCommand(BaseCommand):
    """
    Base for commands that read documents and write documents or reports.

    Subclasses implement ``run(**options)``; library errors raised from it
    become ``CommandError`` with exit status 1 (invalid input) or 2 (usage).
    """

    output_name = ''

    def add_output_arguments(self, parser):
        parser.add_argument(
            '-o', '--output',
            help='Write the resulting document here (default: standard output)'
        )
        parser.add_argument(
            '--name',
            help=f'Name recorded in the output document (default: "{self.output_name}")'
        )

    def add_format_argument(self, parser):
        parser.add_argument(
            '--format',
            choices=['human', 'json'],
            default='human',
            help='Report format: human (default) or json'
        )

    def handle(self, *args, **options):
        try:
            self.run(**options)
        except CommandError:
            raise
        except ShapeMismatch as exc:
            raise CommandError(str(exc), returncode=USAGE)
        except DocumentError as exc:
            raise CommandError(f'invalid document: {exc}', returncode=INVALID)
        except ValidationError as exc:
            raise CommandError('; '.join(exc.messages), returncode=INVALID)
        except BibundleError as exc:
            raise CommandError(str(exc), returncode=INVALID)

    def run(self, **options):
        raise NotImplementedError

    def read(self, reference, *kinds, check=True):
        """Load a document from a file path or ``db:<name>``; check its kind."""
        if reference.startswith(DB_PREFIX):
            name = reference[len(DB_PREFIX):]
            try:
                record = Document.objects.get(name=name)
            except Document.DoesNotExist:
                raise CommandError(f'no stored document named "{name}"', returncode=USAGE)
            document = record.to_document(resolve_stored, check)
        else:
            try:
                text = Path(reference).read_text(encoding='utf-8')
            except OSError as exc:
                raise CommandError(f'cannot read "{reference}": {exc.strerror}', returncode=USAGE)
            try:
                document = documents.parse(text, resolve_stored, check)
            except DocumentError as exc:
                raise CommandError(f'{reference}: {exc}', returncode=INVALID)
        if kinds and document.kind not in kinds:
            raise CommandError(
                f'"{reference}" is a {document.kind}, expected {" or ".join(kinds)}',
                returncode=USAGE,
            )
        return document

    def load(self, reference, kind):
        return self.read(reference, kind).payload

    def write_text(self, text, output):
        if not output:
            self.stdout.write(text, ending='')
            return
        try:
            write_atomic(output, text)
        except OSError as exc:
            raise CommandError(f'cannot write "{output}": {exc.strerror}', returncode=USAGE)

    def emit(self, structure, options):
        name = options.get('name') or self.output_name
        document = documents.document_for(structure, name)
        self.write_text(documents.serialize(document), options.get('output'))
        if options.get('output'):
            self.stdout.write(self.style.SUCCESS(
                f'Wrote {document.kind} "{name}" to {options["output"]}'
            ))

    def report(self, data, lines, options):
        """Print ``data`` as JSON or ``lines`` as text, per ``--format``."""
        if options.get('format') == 'json':
            self.stdout.write(json.dumps(data, sort_keys=True, indent=2))
            return
        for line in lines:
            self.stdout.write(line)
