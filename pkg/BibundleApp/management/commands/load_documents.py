import json
import os

from django.core.management.base import BaseCommand, CommandError
from django.db import transaction

from BibundleApp import documents
from BibundleApp.exceptions import DocumentError
from BibundleApp.management.base import INVALID, USAGE, resolve_stored
from BibundleApp.models import Document


class Command(BaseCommand):
    help = 'Store document files in the database with support for append/overwrite/clear modes'

    def add_arguments(self, parser):
        parser.add_argument(
            'file_path',
            type=str,
            help='JSON file holding one document, a list of documents, or {"documents": [...]}'
        )
        parser.add_argument(
            '--mode',
            type=str,
            choices=['append', 'overwrite', 'clear'],
            default='append',
            help='append (default) skips existing names, overwrite replaces them, clear deletes all first'
        )

    def handle(self, *args, **options):
        file_path = options['file_path']
        mode = options.get('mode', 'append')

        if not os.path.exists(file_path):
            raise CommandError(f'File "{file_path}" does not exist.', returncode=USAGE)

        self.stdout.write(f'Loading documents: {file_path}')
        self.stdout.write(f'Mode: {mode.upper()}')

        with open(file_path, 'r', encoding='utf-8') as handle:
            try:
                data = json.load(handle)
            except json.JSONDecodeError as exc:
                raise CommandError(
                    f'{file_path}: {exc.msg} at line {exc.lineno} column {exc.colno}',
                    returncode=INVALID,
                )

        if isinstance(data, dict) and 'documents' in data:
            records = data['documents']
        elif isinstance(data, list):
            records = data
        else:
            records = [data]

        counts = {'created': 0, 'updated': 0, 'skipped': 0}
        with transaction.atomic():
            if mode == 'clear':
                self.stdout.write('Clearing all stored documents...')
                Document.objects.all().delete()
            for position, record in enumerate(records):
                try:
                    document = documents.from_json(record, resolve_stored)
                except DocumentError as exc:
                    raise CommandError(f'{file_path}: document {position}: {exc}', returncode=INVALID)
                if not document.name:
                    raise CommandError(
                        f'{file_path}: document {position} has no name', returncode=INVALID
                    )
                counts[self._store(document, mode)] += 1

        self._print_summary(counts)

    def _store(self, document, mode):
        fresh = Document.from_document(document)
        try:
            existing = Document.objects.get(name=document.name)
        except Document.DoesNotExist:
            fresh.save()
            return 'created'
        if mode != 'overwrite':
            return 'skipped'
        existing.kind = fresh.kind
        existing.payload = fresh.payload
        existing.save()
        return 'updated'

    def _print_summary(self, counts):
        self.stdout.write('=' * 50)
        self.stdout.write(self.style.SUCCESS('IMPORT SUMMARY'))
        self.stdout.write('=' * 50)
        self.stdout.write(f'  Created: {counts["created"]}')
        self.stdout.write(f'  Updated: {counts["updated"]}')
        self.stdout.write(f'  Skipped: {counts["skipped"]}')
        self.stdout.write(f'Total documents processed: {sum(counts.values())}')
        self.stdout.write('=' * 50)
