# generated project placeholder
