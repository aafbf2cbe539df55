"""Recursive-descent parser for pseudocode text.

Grammar (EBNF):

    Pseudocode ::= Goal Steps
    Goal       ::= 'GOAL:' Description ';'
    Steps      ::= 'STEPS:' (Statement)+
    Statement  ::= SimpleStmt | WhileStmt | IfStmt | ForStmt
    SimpleStmt ::= Description ';'
    WhileStmt  ::= 'while' '(' Cond ')' '{' (Statement)+ '}'
    IfStmt     ::= 'if' '(' Cond ')' '{' (Statement)+ '}'
                   ('elif' '(' Cond ')' '{' (Statement)+ '}')*
                   ('else' '{' (Statement)+ '}')?
    ForStmt    ::= 'for' '(' Cond ')' '{' (Statement)+ '}'
    Cond       ::= SimpleStmt
    Description ::= one or more printable characters excluding ';{}()' and
                    line breaks

Keywords are case-sensitive and only recognized when followed by their
structural token (`(` for if/elif/while/for, `{` for else), so sentences
like "for ever;" or "else;" stay plain descriptions. The header words are
matched literally at the two positions the grammar expects them, which
lets descriptions elsewhere start with "GOAL:" without confusing anything.
"""

from __future__ import annotations

from ..errors import ParseError
from . import lexer
from .lexer import EOF, LBRACE, LPAREN, RBRACE, RPAREN, SEMI, TEXT, Token
from .nodes import Cond, Description, For, If, PseudoProgram, Simple, Statement, While

_STATEMENT_EXPECTED = ["a description", "'if'", "'while'", "'for'"]


class _Tokens:
    def __init__(self, tokens: list[Token]):
        self._tokens = tokens
        self._pos = 0

    def peek(self, ahead: int = 0) -> Token:
        idx = min(self._pos + ahead, len(self._tokens) - 1)
        return self._tokens[idx]

    def advance(self) -> Token:
        tok = self._tokens[self._pos]
        if tok.kind != EOF:
            self._pos += 1
        return tok

    def push_front(self, token: Token) -> None:
        self._tokens.insert(self._pos, token)


def parse(text: str) -> PseudoProgram:
    """Parse pseudocode text into a program, raising ParseError on bad input."""
    return _Parser(text).parse_program()


class _Parser:
    def __init__(self, text: str):
        self._ts = _Tokens(lexer.tokenize(text))

    # -- helpers ----------------------------------------------------------

    def _fail(self, token: Token, message: str, expected: list[str]) -> ParseError:
        return ParseError(token.line, token.column, f"{message}, found {token.describe()}",
                          expected)

    def _expect(self, kind: str, message: str, expected: list[str]) -> Token:
        tok = self._ts.peek()
        if tok.kind != kind:
            raise self._fail(tok, message, expected)
        return self._ts.advance()

    def _split_header(self, token: Token, header: str) -> None:
        """Consume `header` from the front of a text token, requeueing the rest."""
        rest = token.text[len(header):].strip()
        if rest:
            self._ts.push_front(Token(TEXT, rest, token.line, token.column + len(header)))

    # -- grammar ----------------------------------------------------------

    def parse_program(self) -> PseudoProgram:
        tok = self._ts.peek()
        if tok.kind != TEXT or not tok.text.startswith("GOAL:"):
            raise self._fail(tok, "pseudocode must start with a 'GOAL:' header", ["'GOAL:'"])
        self._ts.advance()
        self._split_header(tok, "GOAL:")
        goal = self._parse_description("goal description")
        self._expect(SEMI, "the goal must end with ';'", ["';'"])

        tok = self._ts.peek()
        if tok.kind != TEXT or not tok.text.startswith("STEPS:"):
            raise self._fail(tok, "expected a 'STEPS:' header after the goal", ["'STEPS:'"])
        self._ts.advance()
        self._split_header(tok, "STEPS:")

        steps = [self._parse_statement()]
        while self._ts.peek().kind != EOF:
            steps.append(self._parse_statement())
        return PseudoProgram(goal, tuple(steps))

    def _parse_description(self, what: str) -> Description:
        tok = self._ts.peek()
        if tok.kind != TEXT:
            raise self._fail(tok, f"expected {what}", ["a description"])
        self._ts.advance()
        return Description(tok.text)

    def _parse_statement(self) -> Statement:
        tok = self._ts.peek()
        if tok.kind != TEXT:
            raise self._fail(tok, "expected a statement", _STATEMENT_EXPECTED)
        nxt = self._ts.peek(1)
        if tok.text == "if" and nxt.kind == LPAREN:
            return self._parse_if()
        if tok.text == "while" and nxt.kind == LPAREN:
            self._ts.advance()
            return While(self._parse_cond("'while'"), self._parse_block())
        if tok.text == "for" and nxt.kind == LPAREN:
            self._ts.advance()
            return For(self._parse_cond("'for'"), self._parse_block())
        if tok.text == "elif" and nxt.kind == LPAREN:
            raise self._fail(tok, "'elif' has no matching 'if'", _STATEMENT_EXPECTED)
        if tok.text == "else" and nxt.kind == LBRACE:
            raise self._fail(tok, "'else' has no matching 'if'", _STATEMENT_EXPECTED)
        self._ts.advance()
        self._expect(SEMI, "expected ';' after the statement", ["';'"])
        return Simple(Description(tok.text))

    def _parse_if(self) -> If:
        self._ts.advance()  # 'if'
        cond = self._parse_cond("'if'")
        then = self._parse_block()
        elifs = []
        while self._ts.peek().kind == TEXT and self._ts.peek().text == "elif" \
                and self._ts.peek(1).kind == LPAREN:
            self._ts.advance()
            arm_cond = self._parse_cond("'elif'")
            elifs.append((arm_cond, self._parse_block()))
        else_ = None
        if self._ts.peek().kind == TEXT and self._ts.peek().text == "else" \
                and self._ts.peek(1).kind == LBRACE:
            self._ts.advance()
            else_ = self._parse_block()
        return If(cond, then, tuple(elifs), else_)

    def _parse_cond(self, owner: str) -> Cond:
        self._expect(LPAREN, f"expected '(' after {owner}", ["'('"])
        desc = self._parse_description("a condition")
        self._expect(SEMI, "the condition must end with ';'", ["';'"])
        self._expect(RPAREN, "expected ')' to close the condition", ["')'"])
        return Cond(desc)

    def _parse_block(self) -> tuple[Statement, ...]:
        self._expect(LBRACE, "expected '{' to open the block", ["'{'"])
        stmts: list[Statement] = []
        while True:
            tok = self._ts.peek()
            if tok.kind == RBRACE:
                if not stmts:
                    raise self._fail(tok, "a block must contain at least one statement",
                                     _STATEMENT_EXPECTED)
                self._ts.advance()
                return tuple(stmts)
            if tok.kind == EOF:
                raise self._fail(tok, "block is never closed", ["'}'"])
            stmts.append(self._parse_statement())
